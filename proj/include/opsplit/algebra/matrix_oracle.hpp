#pragma once

#include "opsplit/algebra/scheme_expr.hpp"
#include "opsplit/common/rng.hpp"

namespace opsplit::algebra {

/// Outcome of the matrix polynomial-identity test.
struct OracleVerdict {
    /// Every trial reproduced the target coefficients through degree m.
    bool identity_holds;
    /// The symbolic engine's verdict (expand == target through degree m).
    bool symbolic_match;
    /// identity_holds == symbolic_match.
    bool agrees;
};

/// Independent check of the symbolic engine: each generator L_i is replaced
/// by a random 3x3 matrix with entries in {-3..3}; the scheme and the target
/// are evaluated exactly at integer step sizes, the coefficients in t are
/// recovered by exact polynomial interpolation, and degrees 0..m are compared.
OracleVerdict matrix_oracle_check(const SchemeExpr& expr, int d, int m, int trials, Rng& rng);

} // namespace opsplit::algebra
