#pragma once

#include "valgroup/nilpotent.hpp"
#include "valgroup/solver.hpp"

namespace valgroup {

// t(y) = 1 over a free nilpotent group: the generic solver loop cancels one
// lower-central weight per step, so it finishes within the class.
inline SolveTrace<NilElement> solve_nilpotent(const Term &t, const SymbolTable<NilElement> &table,
                                              const FreeNilAlgebra &algebra)
{
	return solve_regular<NilpotentOps>(t, table, &algebra);
}

} // namespace valgroup
