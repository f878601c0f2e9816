#pragma once

#include <functional>
#include <vector>

#include "lpnse/fields.hpp"

namespace lpnse {

/// Forward transform with the 1/n^3 convention:
///   c(k) = n^-3 * sum_x f(x) exp(-i k.x).
/// The output is exactly Hermitian. Throws NonFiniteError on NaN/Inf input.
SpectralField transform(const PhysicalField& f);

/// Inverse of transform(). Throws SymmetryError when the input is not the
/// transform of a real field (defect above 1e-12 * max |c|).
PhysicalField inverse_transform(const SpectralField& f);

SpectralVectorField transform(const PhysicalVectorField& f);
PhysicalVectorField inverse_transform(const SpectralVectorField& f);

/// Multiply by (i k_axis)^order. Axes are 0-based; the Nyquist plane of the
/// axis is zeroed for odd orders so real fields stay real.
SpectralField derivative(const SpectralField& f, int axis, int order = 1);

/// [d_1 f, d_2 f, d_3 f]
SpectralVectorField gradient(const SpectralField& f);
SpectralField laplacian(const SpectralField& f);
SpectralVectorField laplacian(const SpectralVectorField& u);
SpectralField divergence(const SpectralVectorField& u);

/// Nine components d_j u_i, stored at index 3*i + j.
std::vector<SpectralField> velocity_gradient(const SpectralVectorField& u);

/// Wavenumber used by odd-order derivatives: k with Nyquist components set to 0.
/// The divergence, the projection and the divergence check all use this vector.
void derivative_wavenumber(const Grid& grid, std::size_t flat_index, double k[3]) noexcept;

/// Orthogonal projection onto divergence-free fields; k = 0 is left unchanged.
SpectralVectorField leray_project(const SpectralVectorField& u);

/// max_k |k.u(k)| / max_k |u(k)| (0 for the zero field).
double divergence_defect(const SpectralVectorField& u);

/// Multiply every coefficient by a real radial multiplier m(|k|).
SpectralField apply_radial_multiplier(const SpectralField& f, const std::function<double(double)>& m);

/// Spectral inner product sum_k a(k) conj(b(k)) over all components.
Complex spectral_inner(const SpectralVectorField& a, const SpectralVectorField& b);

}  // namespace lpnse

namespace lpnse {

/// (u.grad)u at the collocation points, sum_j u_j d_j u_i.
PhysicalVectorField convective_product_physical(const SpectralVectorField& u);

/// (u.grad)u formed pointwise from u and grad u at the collocation points,
/// then transformed back. No dealiasing.
SpectralVectorField convective_product(const SpectralVectorField& u);

/// Pressure of the incompressible equations: -lap(pi) = div((u.grad)u),
/// solved spectrally with pi(0) = 0.
SpectralField pressure_from(const SpectralVectorField& u);

}  // namespace lpnse
