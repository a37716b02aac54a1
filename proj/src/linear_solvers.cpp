#include "swe/linear_solvers.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

#include "swe/errors.hpp"
#include "swe/legendre.hpp"

namespace swe {

namespace {

std::string describe(Complex alpha)
{
	std::ostringstream os;
	os.precision(17);
	os << alpha.real() << (alpha.imag() < 0 ? "" : "+") << alpha.imag() << "i";
	return os.str();
}

bool stays_real(Complex alpha, const PrognosticState &b)
{
	return alpha.imag() == 0 && b.is_real();
}

}	// namespace


void ShiftedSolveSpec::validate() const
{
	if (group != TermGroup::LG && group != TermGroup::L)
		throw ConfigError("shifted solve: term group must be lg or l, got " + to_string(group));
	if (!(dt > 0) || !std::isfinite(dt))
		throw ConfigError("shifted solve: dt must be positive");
	if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
		throw ConfigError("shifted solve: alpha must be finite");
}


ShiftedSolver::ShiftedSolver(const SweModel &model, std::size_t cache_budget_bytes)
	: model_(model), phi_scale_(std::sqrt(model.mean_geopotential()) * model.config().radius),
	  budget_(cache_budget_bytes)
{
}


PrognosticState ShiftedSolver::solve(const ShiftedSolveSpec &spec, const PrognosticState &b) const
{
	PrognosticState x = stays_real(spec.alpha, b) || !b.is_real() ? b : b.to_complex();
	solve_in_place(spec, x);
	return x;
}


PrognosticState ShiftedSolver::solve_lg(double dt, Complex alpha, const PrognosticState &b) const
{
	PrognosticState x = stays_real(alpha, b) || !b.is_real() ? b : b.to_complex();
	solve_in_place({TermGroup::LG, dt, alpha}, x);
	return x;
}


PrognosticState ShiftedSolver::solve_l(double dt, Complex alpha, const PrognosticState &b) const
{
	PrognosticState x = stays_real(alpha, b) || !b.is_real() ? b : b.to_complex();
	solve_in_place({TermGroup::L, dt, alpha}, x);
	return x;
}


void ShiftedSolver::solve_in_place(const ShiftedSolveSpec &spec, PrognosticState &x) const
{
	spec.validate();
	model_.check(x);
	if (spec.group == TermGroup::LG)
		solve_lg_impl(spec.dt, spec.alpha, x);
	else
		solve_l_impl(spec.dt, spec.alpha, x);
}


void ShiftedSolver::solve_lg_impl(double dt, Complex alpha, PrognosticState &x) const
{
	if (alpha == Complex(0))
		throw SolverError("shifted solve: alpha = 0 makes the vorticity equation singular");

	const int T = model_.sphere().trunc();
	const double a = model_.config().radius;
	const double phibar = model_.mean_geopotential();
	const double c = dt * std::sqrt(phibar) / a;
	const Complex inv_alpha = 1.0 / alpha;

	for (int m = x.phi_pert.min_m(); m <= T; ++m)
	{
		const int am = std::abs(m);
		auto phi = x.phi_pert.block(m);
		auto vort = x.vort.block(m);
		auto div = x.div.block(m);
		for (std::size_t k = 0; k < phi.size(); ++k)
		{
			const double l = am + static_cast<double>(k);
			const double ll = l * (l + 1);
			const double k2dt = dt * ll / (a * a);
			const Complex det = alpha * alpha + dt * phibar * k2dt;

			// conditioning of the scaled block [[alpha, -c], [c l(l+1), alpha]]
			const double frob2 = 2 * std::norm(alpha) + c * c * (1 + ll * ll);
			if (std::abs(det) == 0 || frob2 / std::abs(det) > singular_threshold)
			{
				std::ostringstream os;
				os << "shifted solve: singular gravity-wave block at (l=" << l << ", m=" << m
					<< ") for alpha=" << describe(alpha);
				throw SolverError(os.str());
			}

			const Complex bp = phi[k], bd = div[k];
			phi[k] = (alpha * bp + dt * phibar * bd) / det;
			div[k] = (alpha * bd - k2dt * bp) / det;
			vort[k] *= inv_alpha;
		}
	}
}


std::shared_ptr<const ShiftedSolver::Factorization> ShiftedSolver::build(double dt, Complex alpha, bool negative_m) const
{
	const auto &cfg = model_.config();
	const int T = cfg.trunc;
	const double a = cfg.radius;
	const double two_omega_dt = 2 * cfg.omega * dt;
	const double phibar = model_.mean_geopotential();
	const double s = phi_scale_;

	auto fac = std::make_shared<Factorization>();
	fac->per_m.resize(2 * T + 1);
	fac->negative_m = negative_m;
	for (int m = negative_m ? -T : 0; m <= T; ++m)
	{
		const int am = std::abs(m);
		const int nl = T + 1 - am;
		BandedLU lu(3 * nl, 4, 4);
		for (int k = 0; k < nl; ++k)
		{
			const int l = am + k;
			const double ll = l * (l + 1.0);
			const int rp = 3 * k, rz = rp + 1, rd = rp + 2;

			lu.at(rp, rp) = alpha;
			lu.at(rp, rd) = -dt * phibar / s;
			lu.at(rd, rp) = dt * ll / (a * a) * s;

			const Complex rot = l > 0 ? Complex(0, two_omega_dt * m / ll) : Complex(0);
			lu.at(rz, rz) = alpha + rot;
			lu.at(rd, rd) = alpha + rot;

			// the l = 0 vorticity and divergence carry no flow, so they do not couple
			if (l - 1 >= am && l >= 2)
			{
				const double c = two_omega_dt * legendre_epsilon(l, am) * (1 + 1.0 / l);
				lu.at(rz, rd - 3) = -c;
				lu.at(rd, rz - 3) = c;
			}
			if (l + 1 <= T)
			{
				const double c = two_omega_dt * legendre_epsilon(l + 1, am) * l / (l + 1.0);
				lu.at(rz, rd + 3) = -c;
				lu.at(rd, rz + 3) = c;
			}
		}

		if (!lu.factor() || lu.pivot_ratio() > singular_threshold)
			throw SolverError("shifted solve: numerically singular band matrix at m=" + std::to_string(m)
					+ " for alpha=" + describe(alpha));
		fac->bytes += lu.bytes();
		fac->per_m[m + T] = std::move(lu);
	}
	return fac;
}


std::shared_ptr<const ShiftedSolver::Factorization> ShiftedSolver::factorization(double dt, Complex alpha,
		bool negative_m) const
{
	const auto key = std::make_pair(dt, std::make_pair(alpha.real(), alpha.imag()));
	{
		std::shared_lock lock(mutex_);
		if (auto it = cache_.find(key); it != cache_.end() && (it->second->negative_m || !negative_m))
			return it->second;
	}

	auto fac = build(dt, alpha, negative_m);
	std::unique_lock lock(mutex_);
	auto it = cache_.find(key);
	if (it != cache_.end())
	{
		if (it->second->negative_m || !negative_m)
			return it->second;
		cached_bytes_ -= it->second->bytes;
		cache_.erase(it);
	}
	if (cached_bytes_ + fac->bytes <= budget_)
	{
		cache_.emplace(key, fac);
		cached_bytes_ += fac->bytes;
	}
	return fac;
}


void ShiftedSolver::prepare(double dt, std::span<const Complex> alphas, bool negative_m) const
{
	ShiftedSolveSpec{TermGroup::L, dt, 1.0}.validate();
	for (const Complex &alpha : alphas)
		factorization(dt, alpha, negative_m);
}


void ShiftedSolver::clear_cache() const
{
	std::unique_lock lock(mutex_);
	cache_.clear();
	cached_bytes_ = 0;
}


std::size_t ShiftedSolver::cache_entries() const
{
	std::shared_lock lock(mutex_);
	return cache_.size();
}


std::size_t ShiftedSolver::cache_bytes() const
{
	std::shared_lock lock(mutex_);
	return cached_bytes_;
}


void ShiftedSolver::solve_l_impl(double dt, Complex alpha, PrognosticState &x) const
{
	const auto fac = factorization(dt, alpha, !x.is_real());
	const int T = model_.sphere().trunc();
	const double s = phi_scale_;
	std::vector<Complex> rhs(3 * (T + 1));

	for (int m = x.phi_pert.min_m(); m <= T; ++m)
	{
		auto phi = x.phi_pert.block(m);
		auto vort = x.vort.block(m);
		auto div = x.div.block(m);
		for (std::size_t k = 0; k < phi.size(); ++k)
		{
			rhs[3 * k] = phi[k] / s;
			rhs[3 * k + 1] = vort[k];
			rhs[3 * k + 2] = div[k];
		}
		fac->per_m[m + T].solve(rhs.data());
		for (std::size_t k = 0; k < phi.size(); ++k)
		{
			phi[k] = rhs[3 * k] * s;
			vort[k] = rhs[3 * k + 1];
			div[k] = rhs[3 * k + 2];
		}
	}
}


PrognosticState ShiftedSolver::apply(const ShiftedSolveSpec &spec, const PrognosticState &x) const
{
	spec.validate();
	const PrognosticState u = stays_real(spec.alpha, x) || !x.is_real() ? x : x.to_complex();
	PrognosticState out = model_.apply_linear(spec.group, u);
	out *= spec.dt;
	out.axpy(spec.alpha, u);
	return out;
}


Eigen::VectorXcd stack_state(const PrognosticState &u)
{
	const PrognosticState c = u.is_real() ? u.to_complex() : u;
	const std::size_t n = c.phi_pert.size();
	Eigen::VectorXcd v(3 * n);
	const SpectralField *fields[] = {&c.phi_pert, &c.vort, &c.div};
	for (int f = 0; f < 3; ++f)
		for (std::size_t i = 0; i < n; ++i)
			v[f * n + i] = fields[f]->data()[i];
	return v;
}


PrognosticState unstack_state(const Eigen::VectorXcd &v, int trunc)
{
	PrognosticState u(trunc, ValueKind::Complex);
	const std::size_t n = u.phi_pert.size();
	if (static_cast<std::size_t>(v.size()) != 3 * n)
		throw ConfigError("unstack_state: vector length does not match truncation");
	SpectralField *fields[] = {&u.phi_pert, &u.vort, &u.div};
	for (int f = 0; f < 3; ++f)
		for (std::size_t i = 0; i < n; ++i)
			fields[f]->data()[i] = v[f * n + i];
	return u;
}


Eigen::MatrixXcd dense_operator_matrix(const SweModel &model, TermGroup group, double dt)
{
	const int T = model.sphere().trunc();
	if (T > 15)
		throw ConfigError("dense_operator_matrix: truncation " + std::to_string(T) + " exceeds 15");
	if (overlaps(group, TermGroup::N) || group == TermGroup::None)
		throw ConfigError("dense_operator_matrix: group must be linear");

	const Eigen::Index n = 3 * static_cast<Eigen::Index>(SpectralField::complex_size(T));
	Eigen::MatrixXcd A(n, n);
	Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
	for (Eigen::Index k = 0; k < n; ++k)
	{
		e[k] = 1;
		PrognosticState col = model.apply_linear(group, unstack_state(e, T));
		col *= dt;
		A.col(k) = stack_state(col);
		e[k] = 0;
	}
	return A;
}

}	// namespace swe
