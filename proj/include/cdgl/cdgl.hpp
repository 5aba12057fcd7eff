#pragma once

#include "cdgl/linear.hpp"
#include "cdgl/morphism.hpp"
#include "cdgl/series.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>

namespace cdgl {

struct DSquaredReport
{
	std::vector<std::pair<int, LieElement>> residues; // generator letter, d(d(g)) != 0

	bool clean() const { return residues.empty(); }
};

/// Free complete dgl truncated at N: a differential table on generators,
/// extended as a degree -1 derivation.
class Cdgl
{
	ContextPtr ctx_;
	std::vector<LieElement> table_;

  public:
	enum class Verify
	{
		yes,
		no
	};

	Cdgl() = default;
	Cdgl(ContextPtr ctx, std::vector<LieElement> table, Verify verify = Verify::yes)
	    : ctx_(std::move(ctx)), table_(std::move(table))
	{
		if (int(table_.size()) != ctx_->size())
			throw std::invalid_argument("cdgl: one differential per generator required");
		for (int g = 0; g < ctx_->size(); ++g)
		{
			auto &e = table_[size_t(g)];
			if (e.context() != ctx_)
				throw std::invalid_argument("cdgl: differential outside the algebra context");
			if (e.is_zero())
				e = LieElement::zero(ctx_, ctx_->degree(g) - 1);
			else if (e.degree() != ctx_->degree(g) - 1)
				throw std::invalid_argument("cdgl: d(" + ctx_->generator(g).label +
				                            ") has the wrong degree");
		}
		if (verify == Verify::yes)
		{
			auto report = check_d_squared();
			if (!report.clean())
				throw std::runtime_error("cdgl: d^2 != 0 on " +
				                         ctx_->generator(report.residues.front().first).label);
		}
	}

	const ContextPtr &context() const { return ctx_; }
	const LieElement &differential(int g) const { return table_[size_t(g)]; }
	const std::vector<LieElement> &table() const { return table_; }

	/// Derivation extension, keeping words of length <= max_len.
	LieElement apply(const LieElement &u, int max_len) const
	{
		if (u.context() != ctx_)
			throw std::invalid_argument("cdgl: element outside the algebra context");
		std::vector<Term> out;
		for (auto &t : u.poly().terms())
		{
			Word w = t.word;
			int k = w.length();
			int room = max_len - (k - 1);
			int prefix_degree = 0;
			for (int i = 0; i < k; ++i)
			{
				Word pre = w.prefix(i), suf = w.suffix(i + 1);
				bool neg = prefix_degree % 2 != 0;
				for (auto &s : table_[size_t(w[i])].poly().terms())
				{
					if (s.word.length() > room)
						continue;
					Rational c = t.coeff * s.coeff;
					if (neg)
						c = -c;
					out.push_back({pre * s.word * suf, std::move(c)});
				}
				prefix_degree += ctx_->degree(w[i]);
			}
		}
		return {ctx_, u.degree() - 1, TensorPoly::from_terms(std::move(out)).truncated(max_len)};
	}

	LieElement operator()(const LieElement &u) const { return apply(u, ctx_->truncation()); }

	/// d(d(g)) for every generator, nonzero residues only.
	DSquaredReport check_d_squared() const
	{
		DSquaredReport r;
		for (int g = 0; g < ctx_->size(); ++g)
		{
			LieElement dd = (*this)(table_[size_t(g)]);
			if (!dd.is_zero())
				r.residues.emplace_back(g, std::move(dd));
		}
		return r;
	}

	/// The length-preserving part d_1 as a derivation in its own right.
	Cdgl linear_part() const
	{
		std::vector<LieElement> lin;
		for (auto &e : table_)
			lin.push_back(e.length_part(1));
		return Cdgl(ctx_, std::move(lin), Verify::no);
	}
};

inline bool is_mc(const Cdgl &d, const LieElement &u)
{
	if (!u.is_zero() && u.degree() != -1)
		throw std::invalid_argument("is_mc: element must have degree -1");
	if (u.is_zero())
		return true;
	LieElement r = d(u);
	r.add_scaled(bracket(u, u), Rational(1, 2));
	return r.is_zero();
}

/// d_a = d + ad_a for a Maurer-Cartan element a.
class PerturbedDifferential
{
	const Cdgl *base_;
	LieElement a_;

  public:
	PerturbedDifferential(const Cdgl &base, LieElement a) : base_(&base), a_(std::move(a))
	{
		if (!is_mc(base, a_))
			throw std::invalid_argument("perturb: element is not Maurer-Cartan");
	}

	const LieElement &element() const { return a_; }
	const Cdgl &base() const { return *base_; }

	LieElement apply(const LieElement &u, int max_len) const
	{
		LieElement r = base_->apply(u, max_len);
		if (!a_.is_zero())
			r += bracket(a_, u).filter_words([max_len](Word w) { return w.length() <= max_len; });
		return r;
	}

	LieElement operator()(const LieElement &u) const
	{
		return apply(u, base_->context()->truncation());
	}

	/// d_a(d_a(g)) on generators; empty when d_a squares to zero.
	DSquaredReport check_square() const
	{
		DSquaredReport r;
		const auto &ctx = base_->context();
		for (int g = 0; g < ctx->size(); ++g)
		{
			LieElement dd = (*this)((*this)(LieElement::generator(ctx, g)));
			if (!dd.is_zero())
				r.residues.emplace_back(g, std::move(dd));
		}
		return r;
	}
};

inline PerturbedDifferential perturb(const Cdgl &d, const LieElement &a)
{
	return PerturbedDifferential(d, a);
}

/// phi(d_src g) - d_dst(phi g) for each source generator.
inline std::vector<LieElement> chain_map_residues(const LieMorphism &phi, const Cdgl &src,
                                                  const Cdgl &dst)
{
	std::vector<LieElement> out;
	for (int g = 0; g < src.context()->size(); ++g)
		out.push_back(phi(src.differential(g)) - dst(phi.image(g)));
	return out;
}

inline bool all_zero(const std::vector<LieElement> &v)
{
	return std::all_of(v.begin(), v.end(), [](const LieElement &e) { return e.is_zero(); });
}

using WordGrade = std::function<int(Word)>;

inline int bracket_length(Word w) { return w.length(); }

/// Linear system for a leading-block solve: find z of degree `unknown_degree`
/// whose grade lies in [lo, hi] and with op(z) matching a target in grade hi
/// and vanishing in grades below hi. Rows are the super-Lyndon words of the
/// images, which determine a Lie element uniquely. Built once, reusable.
class BlockSolver
{
	ContextPtr ctx_;
	WordGrade grade_;
	int degree_;
	int hi_;
	std::vector<LieMonomial> unknowns_;
	std::unordered_map<Word, int> row_of_;
	std::optional<EchelonSolver> solver_;

  public:
	template <class Op>
	BlockSolver(ContextPtr ctx, const Op &op, int unknown_degree, WordGrade grade, int lo, int hi,
	            int min_len = 1, int max_len = -1)
	    : ctx_(std::move(ctx)), grade_(std::move(grade)), degree_(unknown_degree), hi_(hi)
	{
		int n = ctx_->truncation();
		if (max_len < 0 || max_len > n)
			max_len = n;
		for (int len = std::max(1, min_len); len <= max_len; ++len)
			for (auto &m : ctx_->monomials(len, [](int) { return true; }))
			{
				if (ctx_->word_degree(m.word) != unknown_degree)
					continue;
				int g = grade_(m.word);
				if (g >= lo && g <= hi)
					unknowns_.push_back(m);
			}
		std::vector<std::vector<std::pair<Word, Rational>>> cols;
		std::vector<Word> row_words;
		for (auto &m : unknowns_)
		{
			LieElement image = op(LieElement::basis_element(ctx_, m));
			std::vector<std::pair<Word, Rational>> col;
			for (auto &t : image.poly().terms())
				if (grade_(t.word) <= hi_ && ctx_->monomial_for(t.word))
				{
					col.emplace_back(t.word, t.coeff);
					row_words.push_back(t.word);
				}
			cols.push_back(std::move(col));
		}
		std::sort(row_words.begin(), row_words.end());
		row_words.erase(std::unique(row_words.begin(), row_words.end()), row_words.end());
		for (size_t i = 0; i < row_words.size(); ++i)
			row_of_.emplace(row_words[i], int(i));
		std::vector<SparseRow> rows(row_words.size());
		for (size_t j = 0; j < cols.size(); ++j)
			for (auto &[w, c] : cols[j])
				rows[size_t(row_of_[w])].emplace_back(int(j), c);
		solver_.emplace(int(unknowns_.size()), rows);
	}

	size_t unknown_count() const { return unknowns_.size(); }
	size_t equation_count() const { return row_of_.size(); }
	int rank() const { return solver_->rank(); }

	/// Solutions of the homogeneous system (op(z) vanishing up to grade hi).
	std::vector<LieElement> kernel() const
	{
		std::vector<LieElement> out;
		for (auto &x : solver_->kernel_basis())
			out.push_back(assemble(x, degree_));
		return out;
	}

	/// nullopt when the target's grade-hi part is not reachable.
	std::optional<LieElement> solve(const LieElement &target) const
	{
		std::vector<Rational> rhs(row_of_.size());
		for (auto &t : target.poly().terms())
		{
			if (grade_(t.word) != hi_ || !ctx_->monomial_for(t.word))
				continue;
			auto it = row_of_.find(t.word);
			if (it == row_of_.end())
				return std::nullopt;
			rhs[size_t(it->second)] = t.coeff;
		}
		auto x = solver_->solve(rhs);
		if (!x)
			return std::nullopt;
		return assemble(*x, degree_);
	}

  private:
	LieElement assemble(const std::vector<Rational> &x, int degree) const
	{
		LieElement z = LieElement::zero(ctx_, degree);
		for (size_t j = 0; j < unknowns_.size(); ++j)
			if (x[j] != 0)
				z.add_scaled(LieElement::basis_element(ctx_, unknowns_[j]), x[j]);
		return z;
	}
};

/// Some w with d(w) = target in bracket lengths <= hi (and no lower-length
/// image), w supported in lengths [lo, hi]. Deterministic; nullopt if none.
template <class Op>
std::optional<LieElement> solve_boundary(const Op &d, const LieElement &target, int lo, int hi)
{
	const auto &ctx = target.context();
	BlockSolver s(ctx, d, target.degree() + 1, bracket_length, lo, hi, lo, hi);
	return s.solve(target);
}

/// Homology dimension of an operator restricted to a block of the given
/// degree. `in_block` selects the words of the block; the operator must map
/// the block of degree k+1 into the block of degree k.
template <class Op>
int homology_dimension(const ContextPtr &ctx, const Op &op, int degree,
                       const std::function<bool(Word)> &in_block)
{
	auto block = [&](int deg) {
		std::vector<LieMonomial> out;
		for (int len = 1; len <= ctx->truncation(); ++len)
			for (auto &m : ctx->monomials(len, [](int) { return true; }))
				if (ctx->word_degree(m.word) == deg && in_block(m.word))
					out.push_back(m);
		return out;
	};
	auto rank_of = [&](const std::vector<LieMonomial> &cols) {
		std::map<Word, std::vector<std::pair<int, Rational>>> rows;
		for (size_t j = 0; j < cols.size(); ++j)
		{
			LieElement image = op(LieElement::basis_element(ctx, cols[j]));
			for (auto &t : image.poly().terms())
				if (ctx->monomial_for(t.word))
					rows[t.word].emplace_back(int(j), t.coeff);
		}
		std::vector<SparseRow> rv;
		for (auto &[w, r] : rows)
			rv.push_back(std::move(r));
		return EchelonSolver(int(cols.size()), rv).rank();
	};
	auto here = block(degree);
	auto above = block(degree + 1);
	return int(here.size()) - rank_of(here) - rank_of(above);
}

/// Homology of the linear part of d on the (degree, length) block.
inline int homology_block(const Cdgl &d, int degree, int length)
{
	if (length < 1 || length > d.context()->truncation())
		throw std::invalid_argument("homology_block: length out of range");
	Cdgl lin = d.linear_part();
	return homology_dimension(d.context(), lin, degree,
	                          [length](Word w) { return w.length() == length; });
}

} // namespace cdgl
