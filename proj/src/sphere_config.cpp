#include "swe/sphere_config.hpp"

#include <cmath>
#include <string>

#include "swe/errors.hpp"

namespace swe {

int dealiased_nlat(int trunc)
{
	return (3 * trunc + 1 + 1) / 2;		// ceil((3T+1)/2)
}


SphereConfig SphereConfig::for_truncation(int trunc, double radius, double omega, double gravity)
{
	SphereConfig cfg;
	cfg.trunc = trunc;
	cfg.nlat = dealiased_nlat(trunc);
	cfg.nlon = 2 * cfg.nlat;
	cfg.radius = radius;
	cfg.omega = omega;
	cfg.gravity = gravity;
	cfg.validate();
	return cfg;
}


void SphereConfig::validate() const
{
	auto fail = [](const std::string &msg) { throw ConfigError("SphereConfig: " + msg); };

	if (trunc < 1)
		fail("truncation must be >= 1");
	if (nlat < trunc + 1)
		fail("nlat must be >= T+1");
	if (nlat < dealiased_nlat(trunc))
		fail("nlat=" + std::to_string(nlat) + " violates the 3/2 dealiasing rule (need >= "
				+ std::to_string(dealiased_nlat(trunc)) + ")");
	if (nlon < 2 * nlat)
		fail("nlon must be >= 2*nlat");
	if (!(radius > 0) || !std::isfinite(radius))
		fail("radius must be positive");
	if (!(gravity > 0) || !std::isfinite(gravity))
		fail("gravity must be positive");
	if (!(omega >= 0) || !std::isfinite(omega))
		fail("omega must be non-negative");
}

}	// namespace swe
