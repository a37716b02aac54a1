#pragma once

#include <cstddef>
#include <vector>

namespace swe {

struct GaussLegendre
{
	std::vector<double> nodes;		///< mu = sin(latitude), descending (north first)
	std::vector<double> weights;	///< sum to 2
};

/// Gauss-Legendre quadrature on [-1, 1] by Newton iteration on P_n.
GaussLegendre gauss_legendre(int n);

/// sqrt((l^2 - m^2) / (4 l^2 - 1)), the coupling in mu*Pbar_l^m = eps_{l+1} Pbar_{l+1}^m + eps_l Pbar_{l-1}^m
double legendre_epsilon(int l, int m);

/**
 * Orthonormal associated Legendre values Pbar_l^m(mu) and the derivative
 * combination H_l^m(mu) = (1 - mu^2) dPbar_l^m/dmu, for 0 <= m <= l <= T.
 *
 * Normalization: 2*pi * integral_{-1}^{1} Pbar_l^m(mu)^2 dmu = 1. The starting
 * values Pbar_m^m carry a separate binary exponent so that (1-mu^2)^(m/2) does
 * not underflow before the l-recurrence brings them back into range.
 */
class LegendreTable
{
public:
	LegendreTable() = default;
	LegendreTable(int trunc, const std::vector<double> &mu);

	int trunc() const { return trunc_; }
	int num_points() const { return npoints_; }

	/// Contiguous values for l = m..T at point j.
	const double *p(int m, int j) const { return &p_[offset(m, j)]; }
	const double *h(int m, int j) const { return &h_[offset(m, j)]; }

	double p(int l, int m, int j) const { return p_[offset(m, j) + (l - m)]; }
	double h(int l, int m, int j) const { return h_[offset(m, j) + (l - m)]; }

private:
	std::size_t offset(int m, int j) const { return m_offset_[m] * npoints_ + static_cast<std::size_t>(j) * (trunc_ + 1 - m); }

	int trunc_ = 0;
	int npoints_ = 0;
	std::vector<std::size_t> m_offset_;
	std::vector<double> p_;
	std::vector<double> h_;
};

/// Pbar_l^m(mu) for l = m..lmax at a single point (same normalization as LegendreTable).
std::vector<double> associated_legendre(int lmax, int m, double mu);

}	// namespace swe
