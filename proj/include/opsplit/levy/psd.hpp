#pragma once

#include "opsplit/common/types.hpp"

namespace opsplit::levy {

/// Sigma^{1/2} = A Lambda^{1/2} from the eigendecomposition Sigma = A Lambda A^T,
/// so that Sigma^{1/2} (Sigma^{1/2})^T = Sigma. Eigenvalues in [-1e-10, 0) are
/// clamped to zero; anything more negative, or an asymmetric input, is a DomainError.
SmallMatrix sqrt_psd(const SmallMatrix& sigma);

} // namespace opsplit::levy
