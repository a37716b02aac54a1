#include "swe/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "swe/errors.hpp"

namespace swe {

std::string to_string(TermGroup g)
{
	switch (g)
	{
	case TermGroup::None: return "none";
	case TermGroup::LG: return "lg";
	case TermGroup::LC: return "lc";
	case TermGroup::L: return "l";
	case TermGroup::N: return "n";
	case TermGroup::LgN: return "lg_n";
	case TermGroup::LcN: return "lc_n";
	case TermGroup::All: return "ln";
	}
	return "?";
}


TermGroup parse_term_group(std::string_view s)
{
	if (s == "all")
		return TermGroup::All;
	for (unsigned g = 0; g < 8; ++g)
		if (s == to_string(TermGroup(g)))
			return TermGroup(g);

	if (s.empty() || s.front() == '+' || s.back() == '+')
		throw ParseError("unknown term group '" + std::string(s) + "'");
	TermGroup acc = TermGroup::None;
	std::string token;
	std::istringstream is{std::string(s)};
	bool any = false;
	while (std::getline(is, token, '+'))
	{
		if (token == "lg")
			acc = acc | TermGroup::LG;
		else if (token == "lc")
			acc = acc | TermGroup::LC;
		else if (token == "l")
			acc = acc | TermGroup::L;
		else if (token == "n")
			acc = acc | TermGroup::N;
		else if (token == "ln")
			acc = acc | TermGroup::All;
		else
			throw ParseError("unknown term group '" + std::string(s) + "'");
		any = true;
	}
	if (!any)
		throw ParseError("empty term group");
	return acc;
}


PrognosticState PrognosticState::to_complex() const
{
	return {phi_pert.to_complex(), vort.to_complex(), div.to_complex()};
}


PrognosticState PrognosticState::real_part() const
{
	return {phi_pert.real_part(), vort.real_part(), div.real_part()};
}


PrognosticState PrognosticState::imag_part() const
{
	return {phi_pert.imag_part(), vort.imag_part(), div.imag_part()};
}


bool PrognosticState::all_finite() const
{
	return phi_pert.all_finite() && vort.all_finite() && div.all_finite();
}


double PrognosticState::max_abs() const
{
	return std::max({phi_pert.max_abs(), vort.max_abs(), div.max_abs()});
}


void PrognosticState::set_zero()
{
	phi_pert.set_zero();
	vort.set_zero();
	div.set_zero();
}


PrognosticState &PrognosticState::operator+=(const PrognosticState &o)
{
	phi_pert += o.phi_pert;
	vort += o.vort;
	div += o.div;
	return *this;
}


PrognosticState &PrognosticState::operator-=(const PrognosticState &o)
{
	phi_pert -= o.phi_pert;
	vort -= o.vort;
	div -= o.div;
	return *this;
}


PrognosticState &PrognosticState::operator*=(double s)
{
	phi_pert *= s;
	vort *= s;
	div *= s;
	return *this;
}


PrognosticState &PrognosticState::operator*=(Complex s)
{
	phi_pert *= s;
	vort *= s;
	div *= s;
	return *this;
}


void PrognosticState::axpy(double s, const PrognosticState &x)
{
	phi_pert.axpy(s, x.phi_pert);
	vort.axpy(s, x.vort);
	div.axpy(s, x.div);
}


void PrognosticState::axpy(Complex s, const PrognosticState &x)
{
	phi_pert.axpy(s, x.phi_pert);
	vort.axpy(s, x.vort);
	div.axpy(s, x.div);
}


PrognosticState operator+(PrognosticState a, const PrognosticState &b)
{
	a += b;
	return a;
}


PrognosticState operator-(PrognosticState a, const PrognosticState &b)
{
	a -= b;
	return a;
}


PrognosticState operator*(double s, PrognosticState a)
{
	a *= s;
	return a;
}


PrognosticState operator*(Complex s, PrognosticState a)
{
	a *= s;
	return a;
}


double max_abs_diff(const PrognosticState &a, const PrognosticState &b)
{
	return std::max({max_abs_diff(a.phi_pert, b.phi_pert), max_abs_diff(a.vort, b.vort), max_abs_diff(a.div, b.div)});
}


SweModel::SweModel(const Sphere &sphere, ModelParams params)
	: sphere_(sphere), params_(params)
{
	if (!(params_.mean_geopotential > 0) || !std::isfinite(params_.mean_geopotential))
		throw ConfigError("SweModel: mean geopotential must be positive");
}


void SweModel::check(const PrognosticState &u) const
{
	sphere_.check(u.phi_pert);
	sphere_.check(u.vort);
	sphere_.check(u.div);
	if (u.vort.kind() != u.phi_pert.kind() || u.div.kind() != u.phi_pert.kind())
		throw ConfigError("PrognosticState: fields of mixed value kind");
}


GridField SweModel::coriolis_grid() const
{
	GridField f = sphere_.make_grid();
	const double two_omega = 2 * config().omega;
	for (int j = 0; j < sphere_.nlat(); ++j)
		for (double &x : f.row(j))
			x = two_omega * sphere_.mu()[j];
	return f;
}


PrognosticState SweModel::tendency_lg(const PrognosticState &u) const
{
	return tendency(TermGroup::LG, u);
}


PrognosticState SweModel::tendency_lc(const PrognosticState &u) const
{
	return tendency(TermGroup::LC, u);
}


PrognosticState SweModel::tendency_n(const PrognosticState &u) const
{
	return tendency(TermGroup::N, u);
}


PrognosticState SweModel::tendency(TermGroup group, const PrognosticState &u) const
{
	check(u);
	if (!u.is_real())
		throw ConfigError("tendency: real-origin state required (use apply_linear for complex states)");
	if (unsigned(group) > 7)
		throw ConfigError("tendency: unknown term group");

	PrognosticState out = zero_state();

	if (contains(group, TermGroup::LG))
	{
		const double phibar = params_.mean_geopotential;
		const double inv_a2 = 1 / (config().radius * config().radius);
		for (int m = 0; m <= sphere_.trunc(); ++m)
		{
			auto phi = u.phi_pert.block(m);
			auto div = u.div.block(m);
			auto dphi = out.phi_pert.block(m);
			auto ddiv = out.div.block(m);
			for (std::size_t k = 0; k < phi.size(); ++k)
			{
				const double l = m + static_cast<double>(k);
				dphi[k] = -phibar * div[k];
				ddiv[k] = l * (l + 1) * inv_a2 * phi[k];
			}
		}
	}

	const bool coriolis = contains(group, TermGroup::LC) && config().omega != 0;
	const bool nonlinear = contains(group, TermGroup::N);
	if (coriolis || nonlinear)
		add_flux_terms(u, coriolis, nonlinear, out);

	return out;
}


void SweModel::add_flux_terms(const PrognosticState &u, bool coriolis, bool nonlinear, PrognosticState &out) const
{
	const int nlat = sphere_.nlat();
	auto [U, V] = sphere_.cos_weighted_uv(sphere_.inv_laplacian(u.vort), sphere_.inv_laplacian(u.div));

	// q = zeta (nonlinear) + f (Coriolis); its flux gives both the vorticity and divergence terms
	GridField q = nonlinear ? sphere_.synthesis(u.vort) : sphere_.make_grid();
	if (coriolis)
		q += coriolis_grid();

	GridField qU = U, qV = V;
	for (std::size_t i = 0; i < q.size(); ++i)
	{
		qU.data()[i] *= q.data()[i];
		qV.data()[i] *= q.data()[i];
	}
	auto [curl_q, div_q] = sphere_.vortdiv_from_cos_weighted(qU, qV);
	out.vort -= div_q;
	out.div += curl_q;

	if (!nonlinear)
		return;

	GridField phi = sphere_.synthesis(u.phi_pert);
	GridField pU = U, pV = V;
	GridField ke = sphere_.make_grid();
	for (int j = 0; j < nlat; ++j)
	{
		const double mu = sphere_.mu()[j];
		const double inv_cos2 = 1 / (1 - mu * mu);
		auto rp = phi.row(j);
		auto ru = U.row(j);
		auto rv = V.row(j);
		auto rpu = pU.row(j);
		auto rpv = pV.row(j);
		auto rke = ke.row(j);
		for (std::size_t k = 0; k < rp.size(); ++k)
		{
			rpu[k] *= rp[k];
			rpv[k] *= rp[k];
			rke[k] = 0.5 * (ru[k] * ru[k] + rv[k] * rv[k]) * inv_cos2;
		}
	}
	auto [curl_p, div_p] = sphere_.vortdiv_from_cos_weighted(pU, pV);
	out.phi_pert -= div_p;
	out.div -= sphere_.laplacian(sphere_.analysis(ke));
}


PrognosticState SweModel::tendency_lc_spectral(const PrognosticState &u) const
{
	check(u);
	PrognosticState out = zero_state(u.kind());
	const double two_omega = 2 * config().omega;
	if (two_omega == 0)
		return out;

	// zeta/(l(l+1)) and delta/(l(l+1)), i.e. -psi/a^2 and -chi/a^2
	auto scaled = [&](const SpectralField &f) {
		SpectralField g = sphere_.inv_laplacian(f);
		g *= -1 / (config().radius * config().radius);
		return g;
	};
	const SpectralField zt = scaled(u.vort), dt = scaled(u.div);

	// mean vorticity and divergence carry no flow
	SpectralField zeta = u.vort, delta = u.div;
	zeta(0, 0) = 0;
	delta(0, 0) = 0;

	// zeta_t = -2 Omega [mu delta + (psi_lambda + (1 - mu^2) chi_mu) / a^2]
	out.vort = sphere_.mul_mu(delta);
	out.vort -= sphere_.d_lambda(zt);
	out.vort -= sphere_.one_minus_mu2_dmu(dt);
	out.vort *= -two_omega;

	// delta_t = 2 Omega [mu zeta + ((1 - mu^2) psi_mu - chi_lambda) / a^2]
	out.div = sphere_.mul_mu(zeta);
	out.div -= sphere_.one_minus_mu2_dmu(zt);
	out.div += sphere_.d_lambda(dt);
	out.div *= two_omega;
	return out;
}


PrognosticState SweModel::apply_linear(TermGroup group, const PrognosticState &u) const
{
	if (overlaps(group, TermGroup::N))
		throw ConfigError("apply_linear: group contains nonlinear terms");
	if (u.is_real())
		return tendency(group, u);

	PrognosticState re = tendency(group, u.real_part());
	PrognosticState im = tendency(group, u.imag_part());
	PrognosticState out = re.to_complex();
	out.axpy(Complex(0, 1), im.to_complex());
	return out;
}

}	// namespace swe
