#pragma once

#include "pairproj/types.hpp"

namespace pairproj {

/// Concurrence of a pure two-photon state: 2|c_HH c_VV - c_HV c_VH|.
double concurrence_pure(const TwoPhotonState& state);

/// Wootters concurrence of a Hermitian PSD operator with positive trace.
/// The operator is trace-normalized internally. Throws Error(domain) on
/// (numerically) zero trace.
double concurrence_mixed(const PolarizationOperator& op);

/// Uhlmann fidelity Tr[(sqrt(a) b sqrt(a))^{1/2}] between trace-normalized
/// operators. Equals |<psi|phi>| for rank-1 normalized projectors.
/// Throws Error(domain) on zero trace.
double operator_fidelity(const PolarizationOperator& a,
                         const PolarizationOperator& b);

/// Hermitian PSD square root via eigendecomposition; negative eigenvalues
/// are clamped to zero.
Matrix4c psd_sqrt(const Matrix4c& m);

}  // namespace pairproj
