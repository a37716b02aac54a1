#include "swe/legendre.hpp"

#include <cmath>
#include <numbers>

#include "swe/errors.hpp"

namespace swe {

GaussLegendre gauss_legendre(int n)
{
	if (n < 1)
		throw ConfigError("gauss_legendre: need at least one node");

	GaussLegendre gl;
	gl.nodes.resize(n);
	gl.weights.resize(n);

	for (int i = 0; i < (n + 1) / 2; ++i)
	{
		// Tricomi initial guess, then Newton until the update is below 1e-15
		double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
		double dp = 0;
		for (int it = 0; it < 100; ++it)
		{
			double p0 = 1, p1 = x;
			for (int k = 2; k <= n; ++k)
			{
				double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
				p0 = p1;
				p1 = p2;
			}
			if (n == 1)
				p0 = 1;
			dp = n * (x * p1 - p0) / (x * x - 1);
			double dx = p1 / dp;
			x -= dx;
			if (std::abs(dx) < 1e-15)
				break;
		}
		// recompute derivative at the converged node
		double p0 = 1, p1 = x;
		for (int k = 2; k <= n; ++k)
		{
			double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
			p0 = p1;
			p1 = p2;
		}
		dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1);
		double w = 2 / ((1 - x * x) * dp * dp);

		gl.nodes[i] = x;
		gl.nodes[n - 1 - i] = -x;
		gl.weights[i] = w;
		gl.weights[n - 1 - i] = w;
	}
	if (n % 2 == 1)
		gl.nodes[n / 2] = 0;

	return gl;
}


double legendre_epsilon(int l, int m)
{
	if (l <= std::abs(m))
		return 0;
	double ll = l, mm = m;
	return std::sqrt((ll * ll - mm * mm) / (4 * ll * ll - 1));
}


namespace {

constexpr double big_scale_exp = 600;		// 2^600
constexpr double underflow_guard = 1e-250;

/*
 * Pbar_l^m(mu) for l = m..lmax, written to out[0..lmax-m].
 *
 * Pbar_m^m = sqrt((2m+1)/(2m)) sqrt(1-mu^2) Pbar_{m-1}^{m-1} is accumulated as
 * value * 2^(-600 k) so that very small sectoral values survive; the
 * three-term recurrence then runs on the scaled values and each result is
 * unscaled as soon as it is representable.
 */
void legendre_column(int lmax, int m, double mu, double *out)
{
	double s = std::sqrt(std::max(0.0, 1 - mu * mu));
	double pmm = 1 / std::sqrt(4 * std::numbers::pi);
	int scale = 0;		// number of 2^600 factors applied
	for (int k = 1; k <= m; ++k)
	{
		pmm *= std::sqrt((2.0 * k + 1) / (2.0 * k)) * s;
		if (pmm != 0 && std::abs(pmm) < underflow_guard)
		{
			pmm = std::ldexp(pmm, static_cast<int>(big_scale_exp));
			++scale;
		}
	}

	auto unscale = [&](double v) {
		return scale == 0 ? v : std::ldexp(v, -static_cast<int>(big_scale_exp) * scale);
	};

	double pm2 = 0;		// Pbar_{l-2}
	double pm1 = pmm;	// Pbar_{l-1}
	out[0] = unscale(pmm);
	for (int l = m + 1; l <= lmax; ++l)
	{
		double el = legendre_epsilon(l, m);
		double elm1 = legendre_epsilon(l - 1, m);
		double pl = (mu * pm1 - elm1 * pm2) / el;
		pm2 = pm1;
		pm1 = pl;
		if (scale > 0 && std::abs(pl) > 1e-10)
		{
			// bring the running pair back to unscaled values once they are large enough
			while (scale > 0 && std::abs(pm1) > std::ldexp(1.0, -1000 + static_cast<int>(big_scale_exp)))
			{
				pm1 = std::ldexp(pm1, -static_cast<int>(big_scale_exp));
				pm2 = std::ldexp(pm2, -static_cast<int>(big_scale_exp));
				--scale;
			}
		}
		out[l - m] = unscale(pm1);
	}
}

}	// namespace


std::vector<double> associated_legendre(int lmax, int m, double mu)
{
	if (m < 0 || m > lmax)
		throw ConfigError("associated_legendre: need 0 <= m <= lmax");
	std::vector<double> out(lmax - m + 1);
	legendre_column(lmax, m, mu, out.data());
	return out;
}


LegendreTable::LegendreTable(int trunc, const std::vector<double> &mu)
	: trunc_(trunc), npoints_(static_cast<int>(mu.size()))
{
	m_offset_.resize(trunc + 2);
	m_offset_[0] = 0;
	for (int m = 0; m <= trunc; ++m)
		m_offset_[m + 1] = m_offset_[m] + (trunc + 1 - m);

	p_.resize(m_offset_[trunc + 1] * npoints_);
	h_.resize(p_.size());

	std::vector<double> col(trunc + 2);
	for (int m = 0; m <= trunc; ++m)
	{
		for (int j = 0; j < npoints_; ++j)
		{
			legendre_column(trunc + 1, m, mu[j], col.data());
			double *pp = &p_[offset(m, j)];
			double *hh = &h_[offset(m, j)];
			for (int l = m; l <= trunc; ++l)
			{
				pp[l - m] = col[l - m];
				// (1-mu^2) dP_l/dmu = -l eps_{l+1} P_{l+1} + (l+1) eps_l P_{l-1}
				double below = (l > m) ? col[l - m - 1] : 0.0;
				hh[l - m] = -l * legendre_epsilon(l + 1, m) * col[l + 1 - m]
						+ (l + 1) * legendre_epsilon(l, m) * below;
			}
		}
	}
}

}	// namespace swe
