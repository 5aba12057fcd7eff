#pragma once

#include "cdgl/complex.hpp"
#include "cdgl/contraction.hpp"

#include <json.hpp>

#include <map>
#include <mutex>

namespace cdgl {

/// da = -1/2 [a,a]
inline LieElement vertex_differential(const LieElement &a)
{
	return bracket(a, a) * Rational(-1, 2);
}

/// dx = [x,b] + ad_x/(e^{ad_x} - 1)(b - a)
inline LieElement edge_differential(const LieElement &x, const LieElement &a, const LieElement &b)
{
	return bracket(x, b) + ad_series(AdSeries::bernoulli_gen, x, b - a);
}

struct LsInterval
{
	Cdgl cdgl;
	int a, b, x; // letters
};

inline LsInterval ls_interval(int n)
{
	auto ctx = AlgebraContext::make({{0, -1, "a"}, {1, -1, "b"}, {2, 0, "x"}}, n);
	auto a = LieElement::generator(ctx, 0), b = LieElement::generator(ctx, 1),
	     x = LieElement::generator(ctx, 2);
	return {Cdgl(ctx, {vertex_differential(a), vertex_differential(b), edge_differential(x, a, b)}),
	        0, 1, 2};
}

/// psi : (L(a,b,x), d) -> (L(a,c,y), d) with da = -1/2[a,a], dy = c, dc = 0;
/// psi(a) = a, psi(x) = y, psi(b) = (-y).a.
struct CylinderIso
{
	LsInterval interval;
	Cdgl cylinder;
	LieMorphism psi;
};

inline Cdgl cylinder_cdgl(int n)
{
	auto ctx = AlgebraContext::make({{0, -1, "a"}, {1, -1, "c"}, {2, 0, "y"}}, n);
	auto a = LieElement::generator(ctx, 0), c = LieElement::generator(ctx, 1);
	return Cdgl(ctx, {vertex_differential(a), LieElement::zero(ctx, -2), c});
}

inline CylinderIso cylinder_iso(int n)
{
	LsInterval li = ls_interval(n);
	Cdgl cyl = cylinder_cdgl(n);
	const auto &ctx = cyl.context();
	auto a = LieElement::generator(ctx, 0), y = LieElement::generator(ctx, 2);
	LieMorphism psi(li.cdgl.context(), ctx, {a, gauge(-y, a, cyl), y});
	if (!all_zero(chain_map_residues(psi, li.cdgl, cyl)))
		throw std::logic_error("cylinder_iso: psi is not a chain map");
	return {std::move(li), std::move(cyl), std::move(psi)};
}

/// Generator label of a simplex: a<v>, x<v>_<w>, s<v>_<w>_<...>.
inline std::string simplex_label(const Simplex &s)
{
	std::string out = s.size() == 1 ? "a" : s.size() == 2 ? "x" : "s";
	for (size_t i = 0; i < s.size(); ++i)
	{
		if (i)
			out += '_';
		out += std::to_string(s[i]);
	}
	return out;
}

/// Letterwise image of an element under an injective letter map between
/// contexts (degrees must agree letter by letter).
inline LieElement transport(const LieElement &e, const ContextPtr &dst,
                            const std::vector<int> &letter_map)
{
	std::vector<Term> out;
	for (auto &t : e.poly().terms())
	{
		if (t.word.length() > dst->truncation())
			continue;
		std::vector<int> letters;
		for (int l : t.word.letters())
			letters.push_back(letter_map[size_t(l)]);
		out.push_back({Word::from_letters(letters), t.coeff});
	}
	return {dst, e.degree(), TensorPoly::from_terms(std::move(out))};
}

struct Model
{
	SimplicialComplex complex;
	Cdgl cdgl;
	std::vector<Simplex> simplex_of; // per letter
	std::map<Simplex, int> letter_of;

	const ContextPtr &context() const { return cdgl.context(); }
	int truncation() const { return context()->truncation(); }
	int vertex_letter(int v) const
	{
		auto it = letter_of.find({v});
		if (it == letter_of.end())
			throw std::invalid_argument("unknown vertex " + std::to_string(v));
		return it->second;
	}
	LieElement vertex(int v) const { return LieElement::generator(context(), vertex_letter(v)); }
	LieElement generator(const Simplex &s) const
	{
		return LieElement::generator(context(), letter_of.at(s));
	}
};

namespace detail {

inline ContextPtr complex_context(const SimplicialComplex &x, int n,
                                  std::vector<Simplex> &simplex_of,
                                  std::map<Simplex, int> &letter_of)
{
	std::vector<Generator> gens;
	simplex_of = x.simplices();
	for (size_t i = 0; i < simplex_of.size(); ++i)
	{
		const auto &s = simplex_of[i];
		gens.push_back({int(i), int(s.size()) - 2, simplex_label(s)});
		letter_of[s] = int(i);
	}
	return AlgebraContext::make(std::move(gens), n);
}

inline Simplex remove_index(const Simplex &s, size_t i)
{
	Simplex f = s;
	f.erase(f.begin() + long(i));
	return f;
}

// letters of the standard simplex context, mapped into a model along the
// order-preserving bijection 0..m -> s
inline std::vector<int> face_letter_map(const std::vector<Simplex> &standard_simplices,
                                        const Simplex &s, const std::map<Simplex, int> &letter_of)
{
	std::vector<int> out;
	for (auto &t : standard_simplices)
	{
		Simplex img;
		for (int i : t)
			img.push_back(s[size_t(i)]);
		out.push_back(letter_of.at(img));
	}
	return out;
}

struct StandardSolution
{
	ContextPtr ctx;
	std::vector<Simplex> simplices;
	LieElement top;
};

inline const StandardSolution &standard_top(int m, int n);

// differential of every simplex of a complex, higher ones transported from
// the standard solutions; `skip` leaves one generator's entry zero
inline std::vector<LieElement> differential_table(const ContextPtr &ctx,
                                                  const std::vector<Simplex> &simplex_of,
                                                  const std::map<Simplex, int> &letter_of,
                                                  int skip = -1)
{
	std::vector<LieElement> table;
	for (size_t i = 0; i < simplex_of.size(); ++i)
	{
		const auto &s = simplex_of[i];
		int deg = int(s.size()) - 3;
		if (int(i) == skip)
		{
			table.push_back(LieElement::zero(ctx, deg));
			continue;
		}
		if (s.size() == 1)
			table.push_back(vertex_differential(LieElement::generator(ctx, int(i))));
		else if (s.size() == 2)
			table.push_back(edge_differential(LieElement::generator(ctx, int(i)),
			                                  LieElement::generator(ctx, letter_of.at({s[0]})),
			                                  LieElement::generator(ctx, letter_of.at({s[1]}))));
		else
		{
			const auto &std_sol = standard_top(int(s.size()) - 1, ctx->truncation());
			table.push_back(transport(std_sol.top, ctx,
			                          face_letter_map(std_sol.simplices, s, letter_of)));
		}
	}
	return table;
}

// Order-by-order solution of d(g_top) = Omega with d^2 = 0 on Delta^m, m >= 2.
// At length k the defect R_k of D(Omega_{<k}) is a d_1-cycle killed by the
// correction -(1/k) Dyn(H R_k), H the tensor-trick homotopy of a contraction
// of the simplicial generator complex. Omega may contain g_top itself.
inline StandardSolution solve_standard_top(int m, int n)
{
	SimplicialComplex x = SimplicialComplex::standard(m);
	std::vector<Simplex> simplex_of;
	std::map<Simplex, int> letter_of;
	ContextPtr ctx = complex_context(x, n, simplex_of, letter_of);
	int top = int(simplex_of.size()) - 1;
	const Simplex &s = simplex_of.back();
	std::vector<LieElement> table = differential_table(ctx, simplex_of, letter_of, top);
	LieElement omega = LieElement::zero(ctx, m - 2);
	for (size_t i = 0; i < s.size(); ++i)
		omega.add_scaled(LieElement::generator(ctx, letter_of.at(remove_index(s, i))),
		                 i % 2 ? Rational(-1) : Rational(1));
	table[size_t(top)] = omega;
	LinearContraction contraction(Cdgl(ctx, table, Cdgl::Verify::no));
	for (int k = 2; k <= n; ++k)
	{
		Cdgl d(ctx, table, Cdgl::Verify::no);
		LieElement r = d.apply(omega, k).length_part(k);
		if (r.is_zero())
			continue;
		auto z = contraction.solve(r);
		if (!z)
			throw std::logic_error("model builder: defect at length " + std::to_string(k) +
			                       " is not contractible");
		omega -= *z;
		table[size_t(top)] = omega;
	}
	return {ctx, simplex_of, omega};
}

inline const StandardSolution &standard_top(int m, int n)
{
	static std::mutex mutex;
	static std::map<std::pair<int, int>, std::unique_ptr<StandardSolution>> cache;
	{
		std::lock_guard lock(mutex);
		auto it = cache.find({m, n});
		if (it != cache.end())
			return *it->second;
	}
	// computed outside the lock: the recursion needs lower dimensions
	auto sol = std::make_unique<StandardSolution>(solve_standard_top(m, n));
	std::lock_guard lock(mutex);
	auto [it, inserted] = cache.emplace(std::pair{m, n}, std::move(sol));
	return *it->second;
}

} // namespace detail

inline Model build_model(const SimplicialComplex &x, int n)
{
	Model model;
	model.complex = x;
	ContextPtr ctx = detail::complex_context(x, n, model.simplex_of, model.letter_of);
	model.cdgl = Cdgl(ctx, detail::differential_table(ctx, model.simplex_of, model.letter_of));
	return model;
}

inline Model build_simplex_model(int m, int n) { return build_model(SimplicialComplex::standard(m), n); }

/// d_1(g_S) - sum_i (-1)^i g_{S - s_i} per generator; vertices expect 0.
inline std::vector<LieElement> boundary_residues(const Model &model)
{
	std::vector<LieElement> out;
	const auto &ctx = model.context();
	for (size_t i = 0; i < model.simplex_of.size(); ++i)
	{
		const auto &s = model.simplex_of[i];
		LieElement r = model.cdgl.differential(int(i)).length_part(1);
		if (s.size() >= 2)
			for (size_t j = 0; j < s.size(); ++j)
				r.add_scaled(LieElement::generator(ctx, model.letter_of.at(detail::remove_index(s, j))),
				             j % 2 ? Rational(1) : Rational(-1));
		out.push_back(std::move(r));
	}
	return out;
}

inline nlohmann::ordered_json model_to_json(const Model &model)
{
	nlohmann::ordered_json gens = nlohmann::ordered_json::array();
	nlohmann::ordered_json diff = nlohmann::ordered_json::object();
	const auto &ctx = model.context();
	for (int g = 0; g < ctx->size(); ++g)
	{
		const auto &label = ctx->generator(g).label;
		gens.push_back({{"id", label}, {"degree", ctx->degree(g)}, {"simplex", model.simplex_of[size_t(g)]}});
		diff[label] = model.cdgl.differential(g).to_string();
	}
	return {{"truncation", model.truncation()}, {"generators", gens}, {"differential", diff}};
}

class ModelFormatError : public std::runtime_error
{
	using std::runtime_error::runtime_error;
};

/// Reads a model document. The differential is not checked for d^2 = 0;
/// callers run check_d_squared on the result.
inline Model model_from_json(const nlohmann::json &doc)
{
	try
	{
		int n = doc.at("truncation").get<int>();
		std::vector<Generator> gens;
		std::vector<Simplex> simplices;
		std::vector<int> vertices;
		for (auto &g : doc.at("generators"))
		{
			Simplex s = g.at("simplex").get<Simplex>();
			if (s.empty() || !std::is_sorted(s.begin(), s.end()))
				throw ModelFormatError("simplex must be a nonempty ascending vertex list");
			int degree = g.at("degree").get<int>();
			if (degree != int(s.size()) - 2)
				throw ModelFormatError("generator degree must be dim - 1");
			gens.push_back({int(gens.size()), degree, g.at("id").get<std::string>()});
			if (s.size() == 1)
				vertices.push_back(s[0]);
			simplices.push_back(std::move(s));
		}
		std::vector<Simplex> facets = simplices;
		SimplicialComplex x(vertices, facets);
		if (x.simplices().size() != simplices.size())
			throw ModelFormatError("generators must be exactly the simplices of a complex");
		Model model;
		model.complex = x;
		model.simplex_of = simplices;
		for (size_t i = 0; i < simplices.size(); ++i)
			if (!model.letter_of.emplace(simplices[i], int(i)).second)
				throw ModelFormatError("repeated simplex");
		auto ctx = AlgebraContext::make(std::move(gens), n);
		std::vector<LieElement> table;
		const auto &diff = doc.at("differential");
		for (int g = 0; g < ctx->size(); ++g)
		{
			const auto &label = ctx->generator(g).label;
			if (!diff.contains(label))
				throw ModelFormatError("missing differential for " + label);
			table.push_back(parse_element(ctx, diff.at(label).get<std::string>(), ctx->degree(g) - 1));
		}
		model.cdgl = Cdgl(ctx, std::move(table), Cdgl::Verify::no);
		return model;
	}
	catch (const nlohmann::json::exception &e)
	{
		throw ModelFormatError(std::string("malformed model document: ") + e.what());
	}
	catch (const ComplexError &e)
	{
		throw ModelFormatError(std::string("malformed model document: ") + e.what());
	}
}

} // namespace cdgl
