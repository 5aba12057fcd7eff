#pragma once

#include "cdgl/cdgl.hpp"

#include <map>

namespace cdgl {

/// Contraction (iota, pi, h) of the generator complex (W, d_1) onto a chosen
/// homology complement H: id - iota pi = d_1 h + h d_1, with h h = 0,
/// pi h = 0 and h iota = 0.
///
/// Per degree W = B + H + C with d_1 : C -> B bijective. C is spanned by the
/// pivot generators of d_1; H is what remains of the cycles after reduction
/// modulo an echelon basis of B whose pivots sit on the smallest letters, so
/// for the vertices of a connected graph H is the largest vertex.
class LinearContraction
{
	using Vec = std::vector<Rational>; // dense over generator letters
	using Matrix = std::vector<Vec>;   // column per source letter

	ContextPtr ctx_;
	Matrix proj_; // iota pi, W -> W
	Matrix h_;    // W -> W, degree +1

	static void rref(Matrix &rows, std::vector<int> &pivots)
	{
		// in-place reduced row echelon form; pivots are column indices
		pivots.clear();
		size_t r = 0;
		size_t ncols = rows.empty() ? 0 : rows.front().size();
		for (size_t c = 0; c < ncols && r < rows.size(); ++c)
		{
			size_t p = r;
			while (p < rows.size() && rows[p][c] == 0)
				++p;
			if (p == rows.size())
				continue;
			std::swap(rows[p], rows[r]);
			Rational s = 1 / rows[r][c];
			for (auto &v : rows[r])
				v *= s;
			for (size_t i = 0; i < rows.size(); ++i)
				if (i != r && rows[i][c] != 0)
				{
					Rational f = rows[i][c];
					for (size_t k = 0; k < ncols; ++k)
						rows[i][k] -= f * rows[r][k];
				}
			pivots.push_back(int(c));
			++r;
		}
		rows.resize(r);
	}

  public:
	explicit LinearContraction(const Cdgl &d) : ctx_(d.context())
	{
		size_t n = size_t(ctx_->size());
		// d1[g] = linear part of d(g) as a dense vector
		Matrix d1(n, Vec(n));
		for (size_t g = 0; g < n; ++g)
			for (auto &t : d.differential(int(g)).poly().terms())
				if (t.word.length() == 1)
					d1[g][size_t(t.word[0])] = t.coeff;
		proj_.assign(n, Vec(n));
		h_.assign(n, Vec(n));

		std::map<int, std::vector<int>> by_degree;
		for (size_t g = 0; g < n; ++g)
			by_degree[ctx_->degree(int(g))].push_back(int(g));

		for (auto &[deg, letters] : by_degree)
		{
			// B: images of the degree+1 pivot generators, which span C there
			std::vector<int> above;
			if (auto it = by_degree.find(deg + 1); it != by_degree.end())
				above = it->second;
			std::vector<Vec> images;
			std::vector<int> preimage;
			{
				Matrix rows;
				for (int g : above)
					rows.push_back(d1[size_t(g)]);
				// pivot generators: greedily independent images
				Matrix basis;
				std::vector<int> piv;
				for (size_t i = 0; i < above.size(); ++i)
				{
					Matrix trial = basis;
					trial.push_back(rows[i]);
					rref(trial, piv);
					if (trial.size() > basis.size())
					{
						basis = trial;
						images.push_back(rows[i]);
						preimage.push_back(above[i]);
					}
				}
			}
			Matrix bech = images;
			std::vector<int> bpiv;
			rref(bech, bpiv);

			// Z: kernel of d1 on this degree
			Matrix here;
			for (int g : letters)
				here.push_back(d1[size_t(g)]);
			// kernel via rref of the transposed system (columns = letters)
			Matrix sys(n, Vec(letters.size()));
			for (size_t j = 0; j < letters.size(); ++j)
				for (size_t k = 0; k < n; ++k)
					sys[k][j] = here[j][k];
			std::vector<int> spiv;
			rref(sys, spiv);
			std::vector<Vec> cycles;
			std::vector<bool> is_pivot(letters.size());
			for (int p : spiv)
				is_pivot[size_t(p)] = true;
			for (size_t f = 0; f < letters.size(); ++f)
			{
				if (is_pivot[f])
					continue;
				Vec z(n);
				z[size_t(letters[f])] = 1;
				for (size_t r = 0; r < spiv.size(); ++r)
					z[size_t(letters[size_t(spiv[r])])] = -sys[r][f];
				cycles.push_back(std::move(z));
			}
			// H: cycles reduced modulo B, then made independent
			auto reduce = [&](Vec v) {
				for (size_t r = 0; r < bpiv.size(); ++r)
				{
					Rational f = v[size_t(bpiv[r])];
					if (f != 0)
						for (size_t k = 0; k < n; ++k)
							v[k] -= f * bech[r][k];
				}
				return v;
			};
			Matrix hvec;
			for (auto &z : cycles)
				hvec.push_back(reduce(z));
			std::vector<int> hpiv;
			rref(hvec, hpiv);
			// C: the pivot generators of d1 in this degree
			std::vector<int> cgen;
			{
				Matrix basis;
				std::vector<int> piv;
				for (int g : letters)
				{
					Matrix trial = basis;
					trial.push_back(d1[size_t(g)]);
					rref(trial, piv);
					if (trial.size() > basis.size())
					{
						basis = trial;
						cgen.push_back(g);
					}
				}
			}
			// Coordinates of each letter of this degree in the basis B | H | C.
			size_t m = letters.size();
			std::vector<Vec> cols; // vectors restricted to this degree
			auto restrict = [&](const Vec &v) {
				Vec r(m);
				for (size_t j = 0; j < m; ++j)
					r[j] = v[size_t(letters[j])];
				return r;
			};
			for (auto &b : images)
				cols.push_back(restrict(b));
			for (auto &hv : hvec)
				cols.push_back(restrict(hv));
			for (int g : cgen)
			{
				Vec e(m);
				for (size_t j = 0; j < m; ++j)
					e[j] = letters[j] == g ? 1 : 0;
				cols.push_back(std::move(e));
			}
			if (cols.size() != m)
				throw std::logic_error("contraction: inconsistent decomposition");
			Matrix basis_matrix(m, Vec(m)); // rows = letters, cols = basis
			for (size_t j = 0; j < m; ++j)
				for (size_t i = 0; i < m; ++i)
					basis_matrix[i][j] = cols[j][i];
			auto inv = detail::invert_matrix(basis_matrix);
			if (!inv)
				throw std::logic_error("contraction: decomposition is not a basis");
			size_t nb = images.size(), nh = hvec.size();
			for (size_t j = 0; j < m; ++j)
			{
				size_t g = size_t(letters[j]);
				for (size_t k = 0; k < nb; ++k)
				{
					const Rational &c = (*inv)[k][j];
					if (c != 0)
						h_[g][size_t(preimage[k])] += c;
				}
				for (size_t k = 0; k < nh; ++k)
				{
					const Rational &c = (*inv)[nb + k][j];
					if (c != 0)
						for (size_t i = 0; i < m; ++i)
							proj_[g][size_t(letters[i])] += c * hvec[k][size_t(letters[i])];
				}
			}
		}
	}

	const ContextPtr &context() const { return ctx_; }

	/// iota pi and h on a generator, as dense vectors over letters.
	const Vec &projection(int g) const { return proj_[size_t(g)]; }
	const Vec &homotopy(int g) const { return h_[size_t(g)]; }

	LieElement project_generator(int g) const { return as_element(proj_[size_t(g)], ctx_->degree(g)); }
	LieElement homotopy_generator(int g) const
	{
		return as_element(h_[size_t(g)], ctx_->degree(g) + 1);
	}

	/// (iota pi)^{tensor k} applied word by word.
	TensorPoly project(const TensorPoly &p) const
	{
		std::vector<Term> out;
		for (auto &t : p.terms())
			expand(t.word, 0, t.word.length(), Word(), t.coeff, out);
		return TensorPoly::from_terms(std::move(out));
	}

	/// Tensor-trick homotopy
	/// H(w) = sum_i (-1)^{|w_1..w_{i-1}|} P(w_1)..P(w_{i-1}) h(w_i) w_{i+1}..w_k.
	TensorPoly homotopy(const TensorPoly &p) const
	{
		std::vector<Term> out;
		for (auto &t : p.terms())
		{
			Word w = t.word;
			int k = w.length();
			int prefix_degree = 0;
			for (int i = 0; i < k; ++i)
			{
				const Vec &hv = h_[size_t(w[i])];
				Rational sign = prefix_degree % 2 ? Rational(-t.coeff) : t.coeff;
				Word suf = w.suffix(i + 1);
				for (size_t l = 0; l < hv.size(); ++l)
				{
					if (hv[l] == 0)
						continue;
					std::vector<Term> heads;
					expand(w, 0, i, Word(), sign * hv[l], heads);
					for (auto &hd : heads)
						out.push_back({hd.word * Word::letter(int(l)) * suf, hd.coeff});
				}
				prefix_degree += ctx_->degree(w[i]);
			}
		}
		return TensorPoly::from_terms(std::move(out));
	}

	/// z with d_1 z = target, for a d_1-cycle of pure length k >= 1 whose
	/// projection P^{tensor k} vanishes: z = (1/k) Dyn(H target).
	std::optional<LieElement> solve(const LieElement &target) const
	{
		if (target.is_zero())
			return LieElement::zero(ctx_, target.degree() + 1);
		int k = target.poly().min_length();
		if (k != target.poly().max_length())
			throw std::invalid_argument("contraction solve: target must have a single length");
		if (!project(target.poly()).is_zero())
			return std::nullopt;
		TensorPoly z = dynkin_map(*ctx_, homotopy(target.poly()));
		z *= Rational(1, k);
		return LieElement(ctx_, target.degree() + 1, std::move(z));
	}

  private:
	LieElement as_element(const Vec &v, int degree) const
	{
		LieElement e = LieElement::zero(ctx_, degree);
		for (size_t l = 0; l < v.size(); ++l)
			if (v[l] != 0)
				e.add_scaled(LieElement::generator(ctx_, int(l)), v[l]);
		return e;
	}

	// P applied to letters [from, to) of w, appended after `head`
	void expand(Word w, int from, int to, Word head, const Rational &c,
	            std::vector<Term> &out) const
	{
		if (from == to)
		{
			out.push_back({head, c});
			return;
		}
		const Vec &pv = proj_[size_t(w[from])];
		for (size_t l = 0; l < pv.size(); ++l)
			if (pv[l] != 0)
				expand(w, from + 1, to, head * Word::letter(int(l)), c * pv[l], out);
	}
};

} // namespace cdgl
