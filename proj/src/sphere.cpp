#include "swe/sphere.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "swe/errors.hpp"

namespace swe {

namespace {

// FFTW planning is not thread-safe; execution with the new-array API is.
std::mutex &fftw_planner_mutex()
{
	static std::mutex m;
	return m;
}

fftw_complex *as_fftw(Complex *p) { return reinterpret_cast<fftw_complex *>(p); }

}	// namespace


struct FftPlans
{
	fftw_plan r2c = nullptr;
	fftw_plan c2r = nullptr;
	fftw_plan c2c_forward = nullptr;
	fftw_plan c2c_backward = nullptr;
	int nlat = 0;
	int nlon = 0;
	int nhalf = 0;		// nlon/2 + 1

	FftPlans(int nlat_, int nlon_)
		: nlat(nlat_), nlon(nlon_), nhalf(nlon_ / 2 + 1)
	{
		std::vector<double> real(static_cast<std::size_t>(nlat) * nlon);
		std::vector<Complex> half(static_cast<std::size_t>(nlat) * nhalf);
		std::vector<Complex> full(static_cast<std::size_t>(nlat) * nlon);
		int n[] = {nlon};
		unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

		std::lock_guard lock(fftw_planner_mutex());
		r2c = fftw_plan_many_dft_r2c(1, n, nlat, real.data(), nullptr, 1, nlon,
				as_fftw(half.data()), nullptr, 1, nhalf, flags);
		c2r = fftw_plan_many_dft_c2r(1, n, nlat, as_fftw(half.data()), nullptr, 1, nhalf,
				real.data(), nullptr, 1, nlon, flags);
		c2c_forward = fftw_plan_many_dft(1, n, nlat, as_fftw(full.data()), nullptr, 1, nlon,
				as_fftw(full.data()), nullptr, 1, nlon, FFTW_FORWARD, flags);
		c2c_backward = fftw_plan_many_dft(1, n, nlat, as_fftw(full.data()), nullptr, 1, nlon,
				as_fftw(full.data()), nullptr, 1, nlon, FFTW_BACKWARD, flags);
		if (!r2c || !c2r || !c2c_forward || !c2c_backward)
			throw ConfigError("Sphere: FFTW planning failed");
	}

	~FftPlans()
	{
		std::lock_guard lock(fftw_planner_mutex());
		fftw_destroy_plan(r2c);
		fftw_destroy_plan(c2r);
		fftw_destroy_plan(c2c_forward);
		fftw_destroy_plan(c2c_backward);
	}

	/// Fourier coefficients of each latitude row, scaled by 2 pi / nlon; layout nlat x nhalf.
	std::vector<Complex> forward_real(std::span<const double> grid) const
	{
		std::vector<double> in(grid.begin(), grid.end());
		std::vector<Complex> out(static_cast<std::size_t>(nlat) * nhalf);
		fftw_execute_dft_r2c(r2c, in.data(), as_fftw(out.data()));
		const double scale = 2 * std::numbers::pi / nlon;
		for (Complex &c : out)
			c *= scale;
		return out;
	}

	/// Inverse of forward_real without scaling; the input is consumed.
	void backward_real(std::vector<Complex> &half, std::span<double> grid) const
	{
		fftw_execute_dft_c2r(c2r, as_fftw(half.data()), grid.data());
	}

	std::vector<Complex> forward_complex(std::span<const Complex> grid) const
	{
		std::vector<Complex> buf(grid.begin(), grid.end());
		fftw_execute_dft(c2c_forward, as_fftw(buf.data()), as_fftw(buf.data()));
		const double scale = 2 * std::numbers::pi / nlon;
		for (Complex &c : buf)
			c *= scale;
		return buf;
	}

	void backward_complex(std::vector<Complex> &buf) const
	{
		fftw_execute_dft(c2c_backward, as_fftw(buf.data()), as_fftw(buf.data()));
	}
};


Sphere::Sphere(const SphereConfig &cfg)
	: cfg_(cfg)
{
	cfg_.validate();
	gauss_ = gauss_legendre(cfg_.nlat);
	table_ = LegendreTable(cfg_.trunc, gauss_.nodes);
	fft_ = std::make_unique<FftPlans>(cfg_.nlat, cfg_.nlon);
}


Sphere::~Sphere() = default;


double Sphere::longitude(int ilon) const
{
	return 2 * std::numbers::pi * ilon / cfg_.nlon;
}


double Sphere::latitude(int ilat) const
{
	return std::asin(gauss_.nodes[ilat]);
}


void Sphere::check(const SpectralField &f) const
{
	if (f.trunc() != cfg_.trunc)
		throw ConfigError("spectral field truncation T" + std::to_string(f.trunc())
				+ " does not match sphere T" + std::to_string(cfg_.trunc));
}


void Sphere::check(const GridField &g) const
{
	if (g.nlat() != cfg_.nlat || g.nlon() != cfg_.nlon)
		throw ConfigError("grid field shape does not match sphere grid");
}


void Sphere::check(const ComplexGridField &g) const
{
	if (g.nlat() != cfg_.nlat || g.nlon() != cfg_.nlon)
		throw ConfigError("grid field shape does not match sphere grid");
}


SpectralField Sphere::analysis(const GridField &grid) const
{
	check(grid);
	if (!grid.all_finite())
		throw DataError("analysis: non-finite grid value");

	const int T = cfg_.trunc;
	const int nhalf = fft_->nhalf;
	auto fourier = fft_->forward_real(grid.data());

	SpectralField out(T, ValueKind::Real);
	for (int m = 0; m <= T; ++m)
	{
		auto dst = out.block(m);
		const int n = T + 1 - m;
		for (int j = 0; j < cfg_.nlat; ++j)
		{
			Complex c = gauss_.weights[j] * fourier[static_cast<std::size_t>(j) * nhalf + m];
			const double *p = table_.p(m, j);
			for (int k = 0; k < n; ++k)
				dst[k] += c * p[k];
		}
		if (m == 0)
			for (auto &c : dst)
				c = c.real();
	}
	return out;
}


GridField Sphere::synthesis(const SpectralField &spec) const
{
	check(spec);
	if (!spec.is_real())
		throw ConfigError("synthesis: complex-origin field needs synthesis_complex");

	const int T = cfg_.trunc;
	const int nhalf = fft_->nhalf;
	std::vector<Complex> fourier(static_cast<std::size_t>(cfg_.nlat) * nhalf);
	for (int m = 0; m <= T; ++m)
	{
		auto src = spec.block(m);
		const int n = T + 1 - m;
		for (int j = 0; j < cfg_.nlat; ++j)
		{
			const double *p = table_.p(m, j);
			Complex acc = 0;
			for (int k = 0; k < n; ++k)
				acc += src[k] * p[k];
			fourier[static_cast<std::size_t>(j) * nhalf + m] = acc;
		}
	}
	GridField out = make_grid();
	fft_->backward_real(fourier, out.data());
	return out;
}


SpectralField Sphere::analysis(const ComplexGridField &grid) const
{
	check(grid);
	if (!grid.all_finite())
		throw DataError("analysis: non-finite grid value");

	const int T = cfg_.trunc;
	const int nlon = cfg_.nlon;
	auto fourier = fft_->forward_complex(grid.data());

	SpectralField out(T, ValueKind::Complex);
	for (int m = -T; m <= T; ++m)
	{
		const int am = std::abs(m);
		const int col = m >= 0 ? m : nlon + m;
		auto dst = out.block(m);
		const int n = T + 1 - am;
		for (int j = 0; j < cfg_.nlat; ++j)
		{
			Complex c = gauss_.weights[j] * fourier[static_cast<std::size_t>(j) * nlon + col];
			const double *p = table_.p(am, j);
			for (int k = 0; k < n; ++k)
				dst[k] += c * p[k];
		}
	}
	return out;
}


ComplexGridField Sphere::synthesis_complex(const SpectralField &spec_in) const
{
	check(spec_in);
	const SpectralField spec = spec_in.to_complex();

	const int T = cfg_.trunc;
	const int nlon = cfg_.nlon;
	std::vector<Complex> fourier(static_cast<std::size_t>(cfg_.nlat) * nlon);
	for (int m = -T; m <= T; ++m)
	{
		const int am = std::abs(m);
		const int col = m >= 0 ? m : nlon + m;
		auto src = spec.block(m);
		const int n = T + 1 - am;
		for (int j = 0; j < cfg_.nlat; ++j)
		{
			const double *p = table_.p(am, j);
			Complex acc = 0;
			for (int k = 0; k < n; ++k)
				acc += src[k] * p[k];
			fourier[static_cast<std::size_t>(j) * nlon + col] = acc;
		}
	}
	fft_->backward_complex(fourier);
	ComplexGridField out(cfg_.nlat, cfg_.nlon);
	std::copy(fourier.begin(), fourier.end(), out.data().begin());
	return out;
}


double Sphere::integrate(const GridField &grid) const
{
	check(grid);
	double sum = 0;
	for (int j = 0; j < cfg_.nlat; ++j)
	{
		double row = 0;
		for (double v : grid.row(j))
			row += v;
		sum += gauss_.weights[j] * row;
	}
	return sum * 2 * std::numbers::pi / cfg_.nlon;
}


SpectralField Sphere::laplacian(const SpectralField &spec) const
{
	check(spec);
	SpectralField out = spec;
	const double inv_a2 = 1 / (cfg_.radius * cfg_.radius);
	for (int m = out.min_m(); m <= cfg_.trunc; ++m)
	{
		auto b = out.block(m);
		const int am = std::abs(m);
		for (std::size_t k = 0; k < b.size(); ++k)
		{
			const double l = am + static_cast<double>(k);
			b[k] *= -l * (l + 1) * inv_a2;
		}
	}
	return out;
}


SpectralField Sphere::inv_laplacian(const SpectralField &spec) const
{
	check(spec);
	SpectralField out = spec;
	const double a2 = cfg_.radius * cfg_.radius;
	for (int m = out.min_m(); m <= cfg_.trunc; ++m)
	{
		auto b = out.block(m);
		const int am = std::abs(m);
		for (std::size_t k = 0; k < b.size(); ++k)
		{
			const double l = am + static_cast<double>(k);
			b[k] = (l == 0) ? Complex{} : b[k] * (-a2 / (l * (l + 1)));
		}
	}
	return out;
}


SpectralField Sphere::mul_mu(const SpectralField &f) const
{
	check(f);
	SpectralField out(f.trunc(), f.kind());
	const int T = cfg_.trunc;
	for (int m = f.min_m(); m <= T; ++m)
	{
		const int am = std::abs(m);
		auto src = f.block(m);
		auto dst = out.block(m);
		for (int l = am; l <= T; ++l)
		{
			Complex v = 0;
			if (l - 1 >= am)
				v += legendre_epsilon(l, am) * src[l - 1 - am];
			if (l + 1 <= T)
				v += legendre_epsilon(l + 1, am) * src[l + 1 - am];
			dst[l - am] = v;
		}
	}
	return out;
}


SpectralField Sphere::one_minus_mu2_dmu(const SpectralField &f) const
{
	check(f);
	SpectralField out(f.trunc(), f.kind());
	const int T = cfg_.trunc;
	for (int m = f.min_m(); m <= T; ++m)
	{
		const int am = std::abs(m);
		auto src = f.block(m);
		auto dst = out.block(m);
		for (int l = am; l <= T; ++l)
		{
			Complex v = 0;
			if (l - 1 >= am)
				v += -(l - 1.0) * legendre_epsilon(l, am) * src[l - 1 - am];
			if (l + 1 <= T)
				v += (l + 2.0) * legendre_epsilon(l + 1, am) * src[l + 1 - am];
			dst[l - am] = v;
		}
	}
	return out;
}


SpectralField Sphere::d_lambda(const SpectralField &f) const
{
	check(f);
	SpectralField out = f;
	for (int m = f.min_m(); m <= cfg_.trunc; ++m)
		for (auto &c : out.block(m))
			c *= Complex(0, m);
	return out;
}


std::pair<GridField, GridField> Sphere::cos_weighted_uv(const SpectralField &psi, const SpectralField &chi) const
{
	check(psi);
	check(chi);
	if (!psi.is_real() || !chi.is_real())
		throw ConfigError("cos_weighted_uv: real-origin fields required");

	const int T = cfg_.trunc;
	const int nhalf = fft_->nhalf;
	const double inv_a = 1 / cfg_.radius;
	std::vector<Complex> fu(static_cast<std::size_t>(cfg_.nlat) * nhalf);
	std::vector<Complex> fv(fu.size());

	for (int m = 0; m <= T; ++m)
	{
		auto ps = psi.block(m);
		auto ch = chi.block(m);
		const Complex im(0, m);
		const int n = T + 1 - m;
		for (int j = 0; j < cfg_.nlat; ++j)
		{
			const double *p = table_.p(m, j);
			const double *h = table_.h(m, j);
			Complex U = 0, V = 0;
			for (int k = 0; k < n; ++k)
			{
				U += -ps[k] * h[k] + im * ch[k] * p[k];
				V += im * ps[k] * p[k] + ch[k] * h[k];
			}
			fu[static_cast<std::size_t>(j) * nhalf + m] = U * inv_a;
			fv[static_cast<std::size_t>(j) * nhalf + m] = V * inv_a;
		}
	}

	GridField U = make_grid();
	GridField V = make_grid();
	fft_->backward_real(fu, U.data());
	fft_->backward_real(fv, V.data());
	return {std::move(U), std::move(V)};
}


std::pair<SpectralField, SpectralField> Sphere::vortdiv_from_cos_weighted(const GridField &U, const GridField &V) const
{
	check(U);
	check(V);
	if (!U.all_finite() || !V.all_finite())
		throw DataError("vortdiv: non-finite velocity");

	const int T = cfg_.trunc;
	const int nhalf = fft_->nhalf;
	auto fu = fft_->forward_real(U.data());
	auto fv = fft_->forward_real(V.data());
	const double inv_a = 1 / cfg_.radius;

	SpectralField vort(T, ValueKind::Real);
	SpectralField div(T, ValueKind::Real);
	for (int m = 0; m <= T; ++m)
	{
		auto z = vort.block(m);
		auto d = div.block(m);
		const Complex im(0, m);
		const int n = T + 1 - m;
		for (int j = 0; j < cfg_.nlat; ++j)
		{
			const double mu = gauss_.nodes[j];
			const double s = gauss_.weights[j] * inv_a / (1 - mu * mu);
			const Complex cu = s * fu[static_cast<std::size_t>(j) * nhalf + m];
			const Complex cv = s * fv[static_cast<std::size_t>(j) * nhalf + m];
			const double *p = table_.p(m, j);
			const double *h = table_.h(m, j);
			for (int k = 0; k < n; ++k)
			{
				z[k] += im * cv * p[k] + cu * h[k];
				d[k] += im * cu * p[k] - cv * h[k];
			}
		}
		if (m == 0)
		{
			for (auto &c : z)
				c = c.real();
			for (auto &c : d)
				c = c.real();
		}
	}
	return {std::move(vort), std::move(div)};
}


std::pair<GridField, GridField> Sphere::uv_from_psichi(const SpectralField &psi, const SpectralField &chi) const
{
	auto [u, v] = cos_weighted_uv(psi, chi);
	for (int j = 0; j < cfg_.nlat; ++j)
	{
		const double inv_cos = 1 / std::sqrt(1 - gauss_.nodes[j] * gauss_.nodes[j]);
		for (double &x : u.row(j))
			x *= inv_cos;
		for (double &x : v.row(j))
			x *= inv_cos;
	}
	return {std::move(u), std::move(v)};
}


std::pair<GridField, GridField> Sphere::uv_from_vortdiv(const SpectralField &vort, const SpectralField &div) const
{
	return uv_from_psichi(inv_laplacian(vort), inv_laplacian(div));
}


std::pair<SpectralField, SpectralField> Sphere::vortdiv_from_uv(const GridField &u, const GridField &v) const
{
	check(u);
	check(v);
	GridField U = u;
	GridField V = v;
	for (int j = 0; j < cfg_.nlat; ++j)
	{
		const double c = std::sqrt(1 - gauss_.nodes[j] * gauss_.nodes[j]);
		for (double &x : U.row(j))
			x *= c;
		for (double &x : V.row(j))
			x *= c;
	}
	return vortdiv_from_cos_weighted(U, V);
}


std::pair<GridField, GridField> Sphere::gradient(const SpectralField &s) const
{
	return uv_from_psichi(make_spectral(), s);
}

}	// namespace swe
