#pragma once

// Repository validation: every structural invariant of the model becomes a
// Violation value; validation never throws. Violations are sorted by
// (element, rule, message), so the result is independent of declaration
// order in the source document.

#include <vector>

#include "fabsafe/model.hpp"

namespace fabsafe {

// Brings a repository into canonical form: id-keyed collections sorted by id,
// unordered nested lists (failure modes, coverages, zones, ...) sorted by a
// stable key. Order-bearing lists (recipe steps, process steps, property
// declarations) are left untouched.
void normalize(ModelRepository& repository);

std::vector<Violation> validate(const ModelRepository& repository);

}  // namespace fabsafe
