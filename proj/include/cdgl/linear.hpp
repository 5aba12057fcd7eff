#pragma once

#include "cdgl/rational.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace cdgl {

using SparseRow = std::vector<std::pair<int, Rational>>; // sorted by column

/// Exact sparse row echelon form of a fixed matrix, built once with
/// fraction-free integer row operations and replayed on any right-hand side.
///
/// Rows are inserted in order; each is reduced against the pivot rows by its
/// leading column until it vanishes or opens a new pivot. Solutions are the
/// reduced-echelon ones with every free variable set to zero.
class EchelonSolver
{
	using IntRow = std::vector<std::pair<int, Integer>>;

	struct Op
	{
		int pivot_row;
		Integer self_mult; // row <- (self_mult * row - pivot_mult * pivot) / divisor
		Integer pivot_mult;
		Integer divisor;
	};

	int cols_ = 0;
	std::vector<Integer> row_scale_;            // clears denominators of the input row
	std::vector<std::vector<Op>> ops_;          // per input row
	std::vector<IntRow> reduced_;               // final state of each row
	std::vector<int> pivot_of_col_;             // input row index or -1
	std::vector<int> zero_rows_;

	static Integer content(const IntRow &r)
	{
		Integer g = 0;
		for (auto &[c, v] : r)
		{
			mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
			if (g == 1)
				break;
		}
		return g;
	}

	static IntRow combine(const Integer &a, const IntRow &x, const Integer &b, const IntRow &y)
	{
		// a*x - b*y
		IntRow out;
		out.reserve(x.size() + y.size());
		size_t i = 0, j = 0;
		while (i < x.size() || j < y.size())
		{
			if (j == y.size() || (i < x.size() && x[i].first < y[j].first))
			{
				out.emplace_back(x[i].first, a * x[i].second);
				++i;
			}
			else if (i == x.size() || y[j].first < x[i].first)
			{
				out.emplace_back(y[j].first, -b * y[j].second);
				++j;
			}
			else
			{
				Integer v = a * x[i].second - b * y[j].second;
				if (v != 0)
					out.emplace_back(x[i].first, std::move(v));
				++i;
				++j;
			}
		}
		return out;
	}

  public:
	EchelonSolver(int cols, const std::vector<SparseRow> &rows)
	    : cols_(cols), pivot_of_col_(size_t(cols), -1)
	{
		size_t n = rows.size();
		row_scale_.resize(n);
		ops_.resize(n);
		reduced_.resize(n);
		for (size_t i = 0; i < n; ++i)
		{
			Integer l = 1;
			for (auto &[c, v] : rows[i])
				mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
			row_scale_[i] = l;
			IntRow r;
			r.reserve(rows[i].size());
			for (auto &[c, v] : rows[i])
				if (v != 0)
					r.emplace_back(c, Integer(v.get_num() * (l / v.get_den())));
			while (!r.empty())
			{
				int lead = r.front().first;
				int p = pivot_of_col_[size_t(lead)];
				if (p < 0)
					break;
				const IntRow &pr = reduced_[size_t(p)];
				Integer pa = pr.front().second;
				Integer ra = r.front().second;
				Integer g = gcd(pa, ra);
				Integer self_mult = pa / g, pivot_mult = ra / g;
				IntRow next = combine(self_mult, r, pivot_mult, pr);
				Integer div = content(next);
				if (div == 0)
					div = 1;
				if (div != 1)
					for (auto &e : next)
						mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), div.get_mpz_t());
				ops_[i].push_back({p, self_mult, pivot_mult, div});
				r = std::move(next);
			}
			if (r.empty())
				zero_rows_.push_back(int(i));
			else
				pivot_of_col_[size_t(r.front().first)] = int(i);
			reduced_[i] = std::move(r);
		}
	}

	int columns() const { return cols_; }

	int rank() const
	{
		int r = 0;
		for (int p : pivot_of_col_)
			r += p >= 0;
		return r;
	}

	/// Solves A z = rhs (rhs indexed like the input rows); nullopt if inconsistent.
	std::optional<std::vector<Rational>> solve(const std::vector<Rational> &rhs) const
	{
		size_t n = reduced_.size();
		std::vector<Rational> b(n);
		for (size_t i = 0; i < n; ++i)
		{
			b[i] = rhs[i] * row_scale_[i];
			for (auto &op : ops_[i])
			{
				b[i] = (b[i] * op.self_mult - b[size_t(op.pivot_row)] * op.pivot_mult) / op.divisor;
			}
		}
		for (int z : zero_rows_)
			if (b[size_t(z)] != 0)
				return std::nullopt;
		std::vector<Rational> x(static_cast<size_t>(cols_));
		for (int c = cols_ - 1; c >= 0; --c)
		{
			int p = pivot_of_col_[size_t(c)];
			if (p < 0)
				continue;
			const IntRow &r = reduced_[size_t(p)];
			Rational s = b[size_t(p)];
			for (size_t k = 1; k < r.size(); ++k)
				s -= x[size_t(r[k].first)] * r[k].second;
			x[size_t(c)] = s / r.front().second;
		}
		return x;
	}

	/// One kernel vector per free column, in column order.
	std::vector<std::vector<Rational>> kernel_basis() const
	{
		std::vector<std::vector<Rational>> out;
		for (int f = 0; f < cols_; ++f)
		{
			if (pivot_of_col_[size_t(f)] >= 0)
				continue;
			std::vector<Rational> x(static_cast<size_t>(cols_));
			x[size_t(f)] = 1;
			for (int c = cols_ - 1; c >= 0; --c)
			{
				int p = pivot_of_col_[size_t(c)];
				if (p < 0)
					continue;
				const IntRow &r = reduced_[size_t(p)];
				Rational s = 0;
				for (size_t k = 1; k < r.size(); ++k)
					s -= x[size_t(r[k].first)] * r[k].second;
				x[size_t(c)] = s / r.front().second;
			}
			out.push_back(std::move(x));
		}
		return out;
	}
};

} // namespace cdgl
