#include <doctest.h>

#include <cmath>
#include <numbers>

#include "swe/errors.hpp"
#include "swe/sphere.hpp"
#include "test_helpers.hpp"

using namespace swe;
using swe::test::random_spectral;

namespace {

constexpr double pi = std::numbers::pi;

double rel_grid_err(const GridField &a, const GridField &b)
{
	return (a - b).max_abs() / b.max_abs();
}

}	// namespace


TEST_CASE("gauss-legendre quadrature integrates polynomials exactly")
{
	auto gl = gauss_legendre(16);
	double wsum = 0;
	for (double w : gl.weights)
		wsum += w;
	CHECK(wsum == doctest::Approx(2.0).epsilon(1e-15));

	// x^30 is the highest degree exactly integrated by 16 nodes
	double s = 0;
	for (int i = 0; i < 16; ++i)
		s += gl.weights[i] * std::pow(gl.nodes[i], 30);
	CHECK(s == doctest::Approx(2.0 / 31).epsilon(1e-14));
	CHECK(gl.nodes.front() > gl.nodes.back());
}


TEST_CASE("sphere config enforces dealiasing")
{
	auto cfg = SphereConfig::for_truncation(42);
	CHECK(cfg.nlat == 64);
	CHECK(cfg.nlon == 128);
	CHECK(SphereConfig::for_truncation(21).nlat == 32);

	SphereConfig bad = cfg;
	bad.nlat = 43;
	CHECK_THROWS_AS(bad.validate(), ConfigError);
	bad = cfg;
	bad.nlon = 100;
	CHECK_THROWS_AS(bad.validate(), ConfigError);
	bad = cfg;
	bad.radius = -1;
	CHECK_THROWS_AS(bad.validate(), ConfigError);
}


TEST_CASE("analysis of a constant excites only the (0,0) mode")
{
	Sphere sphere(SphereConfig::for_truncation(21));
	auto f = sphere.analysis(sphere.make_grid(1.0));
	CHECK(std::abs(f(0, 0) - std::sqrt(4 * pi)) < 1e-13);
	f(0, 0) = 0;
	CHECK(f.max_abs() < 1e-14);

	// unit (0,0) coefficient synthesizes to the constant 1/sqrt(4 pi)
	SpectralField unit = sphere.make_spectral();
	unit(0, 0) = 1;
	auto g = sphere.synthesis(unit);
	CHECK(std::abs(g(3, 5) - 1 / std::sqrt(4 * pi)) < 1e-15);
	CHECK(sphere.synthesis(sphere.make_spectral()).max_abs() == 0);
}


TEST_CASE("analysis of a sampled Y_2^1 matches direct quadrature")
{
	Sphere sphere(SphereConfig::for_truncation(10));
	GridField g = sphere.make_grid();
	auto y21 = [](double mu, double lon) {
		return std::sqrt(15 / (8 * pi)) * mu * std::sqrt(1 - mu * mu) * std::polar(1.0, lon);
	};
	for (int j = 0; j < sphere.nlat(); ++j)
		for (int k = 0; k < sphere.nlon(); ++k)
			g(j, k) = 2 * y21(sphere.mu()[j], sphere.longitude(k)).real();

	auto f = sphere.analysis(g);

	// independent oracle: sum of weights * samples * conj(Y)
	Complex oracle = 0;
	for (int j = 0; j < sphere.nlat(); ++j)
		for (int k = 0; k < sphere.nlon(); ++k)
			oracle += sphere.weights()[j] * (2 * pi / sphere.nlon()) * g(j, k)
					* std::conj(y21(sphere.mu()[j], sphere.longitude(k)));

	CHECK(std::abs(f(2, 1) - oracle) < 1e-13);
	CHECK(std::abs(f(2, 1) - 1.0) < 1e-13);
	f(2, 1) = 0;
	CHECK(f.max_abs() < 1e-13);
}


TEST_CASE("transform roundtrips are exact for band-limited fields")
{
	for (int T : {10, 21, 42})
	{
		Sphere sphere(SphereConfig::for_truncation(T));
		auto f = random_spectral(T, 100 + T);
		auto back = sphere.analysis(sphere.synthesis(f));
		CHECK(max_abs_diff(back, f) <= 1e-12 * f.max_abs());

		auto grid = sphere.synthesis(f);
		auto again = sphere.synthesis(sphere.analysis(grid));
		CHECK(rel_grid_err(again, grid) <= 1e-11);
	}
}


TEST_CASE("Parseval: grid energy equals coefficient energy")
{
	Sphere sphere(SphereConfig::for_truncation(21));
	auto f = random_spectral(21, 7);
	auto g = sphere.synthesis(f);
	GridField g2 = g;
	for (double &x : g2.data())
		x *= x;
	double grid_energy = sphere.integrate(g2);

	double coeff_energy = 0;
	for (int m = 0; m <= 21; ++m)
		for (auto c : f.block(m))
			coeff_energy += (m == 0 ? 1.0 : 2.0) * std::norm(c);
	CHECK(std::abs(grid_energy - coeff_energy) <= 1e-11 * coeff_energy);
}


TEST_CASE("laplacian eigenstructure")
{
	SphereConfig cfg = SphereConfig::for_truncation(21, 1.0);
	Sphere sphere(cfg);

	SpectralField f = sphere.make_spectral();
	f(0, 0) = 3.0;
	CHECK(sphere.laplacian(f).max_abs() == 0);

	f.set_zero();
	f(1, 1) = Complex(0.5, -2);
	auto lf = sphere.laplacian(f);
	CHECK(lf(1, 1) == -2.0 * f(1, 1));

	for (int l = 0; l <= 21; ++l)
		for (int m = 0; m <= l; ++m)
		{
			SpectralField e = sphere.make_spectral();
			e(l, m) = 1;
			auto r = sphere.laplacian(e);
			CHECK(std::abs(r(l, m) + l * (l + 1.0)) <= 1e-13 * std::max(1.0, l * (l + 1.0)));
		}

	auto g = random_spectral(21, 3, ValueKind::Real, true);
	CHECK(max_abs_diff(sphere.inv_laplacian(sphere.laplacian(g)), g) < 1e-13 * g.max_abs());
}


TEST_CASE("complex-origin transforms agree with two real transforms")
{
	Sphere sphere(SphereConfig::for_truncation(21));
	auto re = random_spectral(21, 11);
	auto im = random_spectral(21, 12);

	// complex field re + i*im
	SpectralField c = re.to_complex();
	c.axpy(Complex(0, 1), im.to_complex());

	auto cg = sphere.synthesis_complex(c);
	auto rg = sphere.synthesis(re);
	auto ig = sphere.synthesis(im);
	double err = 0;
	for (int j = 0; j < sphere.nlat(); ++j)
		for (int k = 0; k < sphere.nlon(); ++k)
			err = std::max(err, std::abs(cg(j, k) - Complex(rg(j, k), ig(j, k))));
	CHECK(err <= 1e-13 * cg.max_abs());

	auto back = sphere.analysis(cg);
	CHECK(max_abs_diff(back, c) <= 1e-12 * c.max_abs());
	CHECK(max_abs_diff(back.real_part(), re) <= 1e-12 * re.max_abs());
	CHECK(max_abs_diff(back.imag_part(), im) <= 1e-12 * im.max_abs());
}


TEST_CASE("transform error paths")
{
	Sphere sphere(SphereConfig::for_truncation(10));
	GridField wrong(5, 10);
	CHECK_THROWS_AS(sphere.analysis(wrong), ConfigError);

	GridField nan = sphere.make_grid();
	nan(2, 2) = std::nan("");
	CHECK_THROWS_AS(sphere.analysis(nan), DataError);

	CHECK_THROWS_AS(sphere.synthesis(SpectralField(12)), ConfigError);
}


TEST_CASE("velocity from vorticity and divergence")
{
	SphereConfig cfg = SphereConfig::for_truncation(21);
	Sphere sphere(cfg);
	const double a = cfg.radius;

	SUBCASE("zero fields give zero wind")
	{
		auto [u, v] = sphere.uv_from_vortdiv(sphere.make_spectral(), sphere.make_spectral());
		CHECK(u.max_abs() == 0);
		CHECK(v.max_abs() == 0);
	}

	SUBCASE("solid body rotation")
	{
		const double u0 = 20.0;
		// zeta = 2 u0 / a * mu, and mu = Y_1^0 / sqrt(3 / (4 pi))
		SpectralField vort = sphere.make_spectral();
		vort(1, 0) = 2 * u0 / a / std::sqrt(3 / (4 * pi));
		auto [u, v] = sphere.uv_from_vortdiv(vort, sphere.make_spectral());
		double err_u = 0;
		for (int j = 0; j < sphere.nlat(); ++j)
			for (int k = 0; k < sphere.nlon(); ++k)
				err_u = std::max(err_u, std::abs(u(j, k) - u0 * std::cos(sphere.latitude(j))));
		CHECK(err_u < 1e-10 * u0);
		CHECK(v.max_abs() < 1e-10 * u0);

		// and back: u = u0 cos(lat) has a single (1,0) vorticity mode and no divergence
		auto [z, d] = sphere.vortdiv_from_uv(u, v);
		CHECK(d.max_abs() < 1e-10 * vort.max_abs());
		CHECK(std::abs(z(1, 0) - vort(1, 0)) < 1e-10 * vort.max_abs());
		z(1, 0) = 0;
		CHECK(z.max_abs() < 1e-10 * vort.max_abs());
	}

	SUBCASE("roundtrip on random zero-mean fields")
	{
		auto vort = random_spectral(21, 21, ValueKind::Real, true, 1e-5);
		auto div = random_spectral(21, 22, ValueKind::Real, true, 1e-5);
		auto [u, v] = sphere.uv_from_vortdiv(vort, div);
		auto [z, d] = sphere.vortdiv_from_uv(u, v);
		CHECK(max_abs_diff(z, vort) < 1e-10 * vort.max_abs());
		CHECK(max_abs_diff(d, div) < 1e-10 * div.max_abs());
	}

	SUBCASE("pure gradient wind has no vorticity")
	{
		auto chi = random_spectral(21, 5, ValueKind::Real, true, 1e6);
		auto [u, v] = sphere.gradient(chi);
		auto [z, d] = sphere.vortdiv_from_uv(u, v);
		CHECK(z.max_abs() < 1e-10 * d.max_abs());
		CHECK(max_abs_diff(d, sphere.laplacian(chi)) < 1e-10 * d.max_abs());
	}
}


TEST_CASE("spectral mu-multiplication and derivative match grid evaluation")
{
	Sphere sphere(SphereConfig::for_truncation(21));
	auto f = random_spectral(21, 9);
	auto g = sphere.synthesis(f);

	// mu * f evaluated on the grid, then analysed
	GridField mg = g;
	for (int j = 0; j < sphere.nlat(); ++j)
		for (double &x : mg.row(j))
			x *= sphere.mu()[j];
	CHECK(max_abs_diff(sphere.mul_mu(f), sphere.analysis(mg)) < 1e-12 * f.max_abs());

	// (1-mu^2) df/dmu = cos(lat) * a * (north gradient)
	auto [ge, gn] = sphere.gradient(f);
	GridField dg = gn;
	for (int j = 0; j < sphere.nlat(); ++j)
		for (double &x : dg.row(j))
			x *= sphere.radius() * std::sqrt(1 - sphere.mu()[j] * sphere.mu()[j]);
	CHECK(max_abs_diff(sphere.one_minus_mu2_dmu(f), sphere.analysis(dg)) < 1e-11 * f.max_abs() * 21);
}


TEST_CASE("associated Legendre values stay finite at high order")
{
	auto p = associated_legendre(85, 85, 0.9999);
	CHECK(std::isfinite(p[0]));
	CHECK(p[0] >= 0);
	auto q = associated_legendre(85, 60, 0.0);
	for (double x : q)
		CHECK(std::isfinite(x));

	// orthonormality with Gauss quadrature
	auto gl = gauss_legendre(64);
	double s = 0;
	for (int j = 0; j < 64; ++j)
	{
		auto c = associated_legendre(60, 30, gl.nodes[j]);
		s += gl.weights[j] * c[60 - 30] * c[60 - 30];
	}
	CHECK(s * 2 * pi == doctest::Approx(1.0).epsilon(1e-12));
}
