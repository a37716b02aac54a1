#include "swe/parallel_rexi.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <utility>

#include "swe/errors.hpp"

namespace swe {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
	return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Runs fn(w) for w = 0..K-1, on K threads when K > 1.
template <class Fn>
void fork_join(int K, Fn &&fn)
{
	if (K == 1)
	{
		fn(0);
		return;
	}
	std::vector<std::thread> pool;
	pool.reserve(K);
	for (int w = 0; w < K; ++w)
		pool.emplace_back([&fn, w] { fn(w); });
	for (auto &t : pool)
		t.join();
}

std::vector<std::span<Complex>> field_spans(PrognosticState &s)
{
	return {s.phi_pert.data(), s.vort.data(), s.div.data()};
}

std::vector<std::span<const Complex>> field_spans(const PrognosticState &s)
{
	return {s.phi_pert.data(), s.vort.data(), s.div.data()};
}

/// out[i - i0] = sum over terms [lo, hi) of terms[n][i] as a fixed pairwise tree, for i in [i0, i1).
void tree_sum(const std::vector<const Complex *> &terms, std::size_t lo, std::size_t hi, std::size_t i0, std::size_t i1,
		Complex *out)
{
	if (hi - lo == 1)
	{
		std::copy(terms[lo] + i0, terms[lo] + i1, out);
		return;
	}
	const std::size_t mid = lo + (hi - lo) / 2;
	tree_sum(terms, lo, mid, i0, i1, out);
	std::vector<Complex> right(i1 - i0);
	tree_sum(terms, mid, hi, i0, i1, right.data());
	for (std::size_t i = 0; i < right.size(); ++i)
		out[i] += right[i];
}

}	// namespace


void WorkPlan::validate() const
{
	if (num_terms < 1 || num_workers < 1 || static_cast<int>(assignments.size()) != num_workers)
		throw ConfigError("WorkPlan: inconsistent sizes");
	std::vector<int> seen(num_terms, 0);
	std::size_t lo = assignments[0].size(), hi = lo;
	for (const auto &a : assignments)
	{
		lo = std::min(lo, a.size());
		hi = std::max(hi, a.size());
		for (int n : a)
		{
			if (n < 0 || n >= num_terms || seen[n]++)
				throw ConfigError("WorkPlan: assignments do not partition the terms");
		}
	}
	if (std::count(seen.begin(), seen.end(), 1) != num_terms || hi - lo > 1)
		throw ConfigError("WorkPlan: unbalanced or incomplete partition");
}


WorkPlan distribute_terms(int num_terms, int num_workers)
{
	if (num_terms < 1 || num_workers < 1)
		throw ConfigError("distribute_terms: need N >= 1 and K >= 1");
	WorkPlan plan;
	plan.num_terms = num_terms;
	plan.num_workers = num_workers;
	plan.assignments.resize(num_workers);
	const int base = num_terms / num_workers, extra = num_terms % num_workers;
	int next = 0;
	for (int w = 0; w < num_workers; ++w)
	{
		const int count = base + (w < extra ? 1 : 0);
		for (int i = 0; i < count; ++i)
			plan.assignments[w].push_back(next++);
	}
	return plan;
}


bool TimingBreakdown::closure_holds(double eps) const
{
	for (double v : {overall, nonlinearities, rexi_total, broadcast, term_solves, reduce})
		if (!(v >= 0))
			return false;
	return broadcast + term_solves + reduce <= rexi_total * (1 + eps) && rexi_total <= overall * (1 + 1e-12);
}


TimingBreakdown &TimingBreakdown::operator+=(const TimingBreakdown &o)
{
	overall += o.overall;
	nonlinearities += o.nonlinearities;
	rexi_total += o.rexi_total;
	broadcast += o.broadcast;
	term_solves += o.term_solves;
	reduce += o.reduce;
	return *this;
}


nlohmann::json to_json(const TimingBreakdown &t, int num_workers, int num_terms, int ensemble)
{
	return {
		{"overall", t.overall},
		{"nonlinearities", t.nonlinearities},
		{"rexi_total", t.rexi_total},
		{"broadcast", t.broadcast},
		{"term_solves", t.term_solves},
		{"reduce", t.reduce},
		{"K", num_workers},
		{"N", num_terms},
		{"ensemble", ensemble},
	};
}


TimingBreakdown min_timings(std::span<const TimingBreakdown> runs)
{
	if (runs.empty())
		return {};
	TimingBreakdown m = runs[0];
	for (const auto &r : runs.subspan(1))
	{
		m.overall = std::min(m.overall, r.overall);
		m.nonlinearities = std::min(m.nonlinearities, r.nonlinearities);
		m.rexi_total = std::min(m.rexi_total, r.rexi_total);
		m.broadcast = std::min(m.broadcast, r.broadcast);
		m.term_solves = std::min(m.term_solves, r.term_solves);
		m.reduce = std::min(m.reduce, r.reduce);
	}
	return m;
}


bool conjugate_symmetric(std::span<const Complex> alphas, std::span<const RexiInput> inputs, double tol)
{
	const std::size_t N = alphas.size();
	auto close = [tol](Complex a, Complex b) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); };
	for (std::size_t n = 0; n < N; ++n)
	{
		bool found = false;
		for (std::size_t p = 0; p < N && !found; ++p)
		{
			if (!close(alphas[p], std::conj(alphas[n])))
				continue;
			found = std::all_of(inputs.begin(), inputs.end(),
					[&](const RexiInput &in) { return close(in.betas[p], std::conj(in.betas[n])); });
		}
		if (!found)
			return false;
	}
	return true;
}


RexiExecutor::RexiExecutor(const ShiftedSolver &solver, int num_workers, ReduceMode mode)
	: solver_(solver), workers_(num_workers), mode_(mode)
{
	if (num_workers < 1)
		throw ConfigError("RexiExecutor: need at least one worker");
}


PrognosticState RexiExecutor::apply(TermGroup group, double dt, const RexiCoefficients &coeffs,
		const PrognosticState &u, TimingBreakdown *timing) const
{
	const RexiInput in{&u, coeffs.betas};
	return apply(group, dt, coeffs.alphas, std::span<const RexiInput>(&in, 1), timing);
}


PrognosticState RexiExecutor::apply(TermGroup group, double dt, std::span<const Complex> alphas,
		std::span<const RexiInput> inputs, TimingBreakdown *timing) const
{
	const auto t_start = Clock::now();
	const int N = static_cast<int>(alphas.size());
	if (N < 1 || inputs.empty())
		throw ConfigError("REXI apply: need at least one pole and one input");
	for (const auto &in : inputs)
	{
		if (!in.rhs || static_cast<int>(in.betas.size()) != N)
			throw ConfigError("REXI apply: every input needs one weight per pole");
		solver_.model().check(*in.rhs);
	}
	ShiftedSolveSpec{group, dt, 1.0}.validate();

	const bool real_inputs = std::all_of(inputs.begin(), inputs.end(), [](const RexiInput &in) { return in.rhs->is_real(); });
	const bool half = real_inputs && conjugate_symmetric(alphas, inputs);
	const ValueKind kind = half ? ValueKind::Real : ValueKind::Complex;

	// broadcast: every worker gets its own copy of the inputs
	const auto t_bcast = Clock::now();
	const int K = std::min(workers_, N);
	std::vector<std::vector<PrognosticState>> local(K);
	for (int w = 0; w < K; ++w)
		for (const auto &in : inputs)
			local[w].push_back(half || !in.rhs->is_real() ? *in.rhs : in.rhs->to_complex());
	const double t_broadcast = seconds_since(t_bcast);

	const WorkPlan plan = distribute_terms(N, K);
	const int trunc = inputs[0].rhs->trunc();
	std::vector<PrognosticState> results(mode_ == ReduceMode::FixedTree ? N : 0);
	PrognosticState total(trunc, kind);
	std::mutex total_mutex;
	std::vector<std::exception_ptr> errors(K);
	std::vector<std::vector<int>> failed(K);

	const auto t_solve = Clock::now();
	fork_join(K, [&](int w) {
		PrognosticState partial(trunc, kind);
		for (int n : plan.assignments[w])
		{
			try
			{
				// on half-spectrum storage the weighted sum holds complex m >= 0 coefficients
				PrognosticState x(trunc, kind);
				auto xs = field_spans(x);
				for (std::size_t k = 0; k < inputs.size(); ++k)
				{
					const Complex beta = inputs[k].betas[n];
					auto vs = field_spans(std::as_const(local[w][k]));
					for (std::size_t f = 0; f < xs.size(); ++f)
						for (std::size_t i = 0; i < xs[f].size(); ++i)
							xs[f][i] += beta * vs[f][i];
				}
				solver_.solve_in_place({group, dt, alphas[n]}, x);
				if (mode_ == ReduceMode::FixedTree)
					results[n] = std::move(x);
				else
					partial += x;
			}
			catch (...)
			{
				if (!errors[w])
					errors[w] = std::current_exception();
				failed[w].push_back(n);
			}
		}
		if (mode_ == ReduceMode::Unordered && failed[w].empty())
		{
			std::lock_guard lock(total_mutex);
			total += partial;
		}
	});
	const double t_terms = seconds_since(t_solve);

	std::vector<int> failed_terms;
	std::exception_ptr first;
	for (int w = 0; w < K; ++w)
	{
		failed_terms.insert(failed_terms.end(), failed[w].begin(), failed[w].end());
		if (!first)
			first = errors[w];
	}
	if (first)
	{
		std::string what;
		try
		{
			std::rethrow_exception(first);
		}
		catch (const std::exception &e)
		{
			what = e.what();
		}
		std::string list;
		for (int n : failed_terms)
			list += (list.empty() ? "" : ",") + std::to_string(n);
		throw SolverError("REXI terms [" + list + "] failed: " + what);
	}

	const auto t_red = Clock::now();
	if (mode_ == ReduceMode::FixedTree)
	{
		auto out_spans = field_spans(total);
		for (std::size_t f = 0; f < out_spans.size(); ++f)
		{
			std::vector<const Complex *> terms(N);
			for (int n = 0; n < N; ++n)
				terms[n] = field_spans(std::as_const(results[n]))[f].data();
			const std::size_t len = out_spans[f].size();
			fork_join(K, [&](int w) {
				const std::size_t i0 = len * w / K, i1 = len * (w + 1) / K;
				if (i0 == i1)
					return;
				tree_sum(terms, 0, N, i0, i1, out_spans[f].data() + i0);
			});
		}
	}

	PrognosticState out;
	if (half)
	{
		// m = 0 coefficients of a real field are real
		double residue = 0;
		for (auto *f : {&total.phi_pert, &total.vort, &total.div})
		{
			double im = 0;
			for (auto &c : f->block(0))
			{
				im = std::max(im, std::abs(c.imag()));
				c.imag(0);
			}
			const double scale = f->max_abs();
			residue = std::max(residue, scale > 0 ? im / scale : 0.0);
		}
		last_residue_ = residue;
		out = std::move(total);
	}
	else if (real_inputs)
	{
		const PrognosticState im = total.imag_part();
		out = total.real_part();
		double residue = 0;
		for (auto [a, b] : {std::pair{&im.phi_pert, &out.phi_pert}, {&im.vort, &out.vort}, {&im.div, &out.div}})
			residue = std::max(residue, b->max_abs() > 0 ? a->max_abs() / b->max_abs() : 0.0);
		last_residue_ = residue;
	}
	else
	{
		last_residue_ = 0;
		out = std::move(total);
	}
	const double t_reduce = seconds_since(t_red);

	if (timing)
	{
		const double total_time = seconds_since(t_start);
		timing->broadcast += t_broadcast;
		timing->term_solves += t_terms;
		timing->reduce += t_reduce;
		timing->rexi_total += total_time;
	}
	return out;
}


AmdahlReport amdahl_report(std::span<const std::pair<int, TimingBreakdown>> runs, int hardware_threads)
{
	if (runs.size() < 2)
		throw ConfigError("amdahl_report: need runs for at least two worker counts");
	auto base = std::min_element(runs.begin(), runs.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
	auto effective = [hardware_threads](int K) { return hardware_threads > 0 ? std::min(K, hardware_threads) : K; };

	const TimingBreakdown &t0 = base->second;
	if (!(t0.overall > 0))
		throw ConfigError("amdahl_report: base run has no recorded time");

	// parallel work of the base run, rescaled to a single processor
	const double p_base = effective(base->first);
	const double parallel1 = t0.term_solves * p_base;
	const double serial = std::max(0.0, t0.overall - t0.term_solves);
	const double total1 = serial + parallel1;

	AmdahlReport rep;
	rep.serial_fraction = total1 > 0 ? serial / total1 : 1.0;
	rep.max_speedup = rep.serial_fraction > 0 ? 1 / rep.serial_fraction : std::numeric_limits<double>::infinity();
	for (const auto &[K, t] : runs)
	{
		const double s = rep.serial_fraction;
		auto time_at = [s](double P) { return s + (1 - s) / P; };
		AmdahlRow row;
		row.workers = K;
		row.projected_speedup = time_at(p_base) / time_at(effective(K));
		row.measured_speedup = t.overall > 0 ? t0.overall / t.overall : 0;
		rep.rows.push_back(row);
	}
	return rep;
}

}	// namespace swe
