#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "swe/grid_field.hpp"
#include "swe/legendre.hpp"
#include "swe/spectral_field.hpp"
#include "swe/sphere_config.hpp"

namespace swe {

struct FftPlans;

/**
 * Spherical-harmonic transform plan and spectral differential operators.
 *
 * Immutable after construction; every method only touches caller-owned
 * data and local scratch, so one Sphere may be shared by many threads.
 *
 * Analysis:  f_lm = sum_j w_j Pbar_l^m(mu_j) F_m(j),
 *            F_m(j) = 2 pi / nlon * sum_k f(j,k) exp(-i m lambda_k)
 * Synthesis: f(j,k) = sum_{l,m} f_lm Pbar_l^|m|(mu_j) exp(i m lambda_k)
 */
class Sphere
{
public:
	explicit Sphere(const SphereConfig &cfg);
	~Sphere();

	Sphere(const Sphere &) = delete;
	Sphere &operator=(const Sphere &) = delete;

	const SphereConfig &config() const { return cfg_; }
	int trunc() const { return cfg_.trunc; }
	int nlat() const { return cfg_.nlat; }
	int nlon() const { return cfg_.nlon; }
	double radius() const { return cfg_.radius; }

	const std::vector<double> &mu() const { return gauss_.nodes; }
	const std::vector<double> &weights() const { return gauss_.weights; }
	double longitude(int ilon) const;
	double latitude(int ilat) const;
	const LegendreTable &legendre() const { return table_; }

	GridField make_grid(double value = 0) const { return GridField(cfg_.nlat, cfg_.nlon, value); }
	SpectralField make_spectral(ValueKind kind = ValueKind::Real) const { return SpectralField(cfg_.trunc, kind); }

	SpectralField analysis(const GridField &grid) const;
	GridField synthesis(const SpectralField &spec) const;

	SpectralField analysis(const ComplexGridField &grid) const;
	ComplexGridField synthesis_complex(const SpectralField &spec) const;

	/// Quadrature integral over the unit sphere (i.e. without the a^2 factor).
	double integrate(const GridField &grid) const;

	SpectralField laplacian(const SpectralField &spec) const;
	SpectralField inv_laplacian(const SpectralField &spec) const;

	/// Physical velocity components from stream function and velocity potential.
	std::pair<GridField, GridField> uv_from_psichi(const SpectralField &psi, const SpectralField &chi) const;
	std::pair<GridField, GridField> uv_from_vortdiv(const SpectralField &vort, const SpectralField &div) const;

	/// (vorticity, divergence) of the vector field (u, v).
	std::pair<SpectralField, SpectralField> vortdiv_from_uv(const GridField &u, const GridField &v) const;

	/// Gradient (east, north components) of a scalar field.
	std::pair<GridField, GridField> gradient(const SpectralField &s) const;

	// Spectral-space primitives, exact on the truncated expansion
	// (results are truncated back to l <= T).

	/// mu * f
	SpectralField mul_mu(const SpectralField &f) const;
	/// (1 - mu^2) df/dmu
	SpectralField one_minus_mu2_dmu(const SpectralField &f) const;
	/// df/dlambda
	SpectralField d_lambda(const SpectralField &f) const;

	/// cos(lat)-weighted velocity (U, V) = (u, v) cos(lat); polynomial in mu, so products stay alias-free.
	std::pair<GridField, GridField> cos_weighted_uv(const SpectralField &psi, const SpectralField &chi) const;
	/// (vorticity, divergence) from cos(lat)-weighted components.
	std::pair<SpectralField, SpectralField> vortdiv_from_cos_weighted(const GridField &U, const GridField &V) const;

	/// Throws ConfigError unless the field matches this sphere's truncation.
	void check(const SpectralField &f) const;
	void check(const GridField &g) const;
	void check(const ComplexGridField &g) const;

private:

	SphereConfig cfg_;
	GaussLegendre gauss_;
	LegendreTable table_;
	std::unique_ptr<FftPlans> fft_;
};

}	// namespace swe
