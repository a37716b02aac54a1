#pragma once

namespace swe {

/// Earth-like constants used by the barotropic instability setup.
namespace earth {
inline constexpr double radius = 6.37122e6;		///< m
inline constexpr double omega = 7.292e-5;		///< 1/s
inline constexpr double gravity = 9.80616;		///< m/s^2
}

/**
 * Resolution and planet constants of a spectral sphere discretization.
 *
 * The physical grid is Gauss-Legendre in latitude and equiangular in
 * longitude. Grid sizes must satisfy the 3/2 dealiasing rule for the
 * triangular truncation, i.e. nlat >= ceil((3T+1)/2) and nlon >= 2*nlat.
 */
struct SphereConfig
{
	int trunc = 0;
	int nlat = 0;
	int nlon = 0;
	double radius = earth::radius;
	double omega = earth::omega;
	double gravity = earth::gravity;

	/// Smallest dealiased grid for truncation T, nlon rounded up to an even number.
	static SphereConfig for_truncation(
			int trunc,
			double radius = earth::radius,
			double omega = earth::omega,
			double gravity = earth::gravity
	);

	/// Throws ConfigError if any invariant is violated.
	void validate() const;

	bool same_grid(const SphereConfig &other) const
	{
		return trunc == other.trunc && nlat == other.nlat && nlon == other.nlon;
	}

	bool operator==(const SphereConfig &) const = default;
};

/// Minimum number of Gauss latitudes for alias-free quadratic products.
int dealiased_nlat(int trunc);

}	// namespace swe
