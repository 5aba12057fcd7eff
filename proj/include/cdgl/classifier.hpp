#pragma once

#include "cdgl/contraction.hpp"
#include "cdgl/graph_decomposition.hpp"
#include "cdgl/random.hpp"

#include <json.hpp>

#include <memory>
#include <mutex>
#include <tuple>

namespace cdgl {

class InvalidMcError : public std::invalid_argument
{
	using std::invalid_argument::invalid_argument;
};

class ReductionError : public std::runtime_error
{
	using std::runtime_error::runtime_error;
};

/// Vertex coefficients of the linear part of an MC element. In these
/// coordinates single coefficients vary along gauge orbits (b gauged by t x
/// has coefficients t and 1 - t); the sum over each component is the
/// invariant, with every sum 0 or 1 and at most one equal to 1.
struct LambdaSignature
{
	std::map<int, Rational> by_vertex;
	std::vector<Rational> by_component;
	std::optional<int> component; // the component with sum 1

	bool zero() const { return !component; }
};

inline LambdaSignature lambda_signature(const Model &model, const LieElement &u)
{
	if (!is_mc(model.cdgl, u))
		throw InvalidMcError("lambda_signature: element is not Maurer-Cartan");
	LambdaSignature sig;
	LieElement lin = u.length_part(1);
	for (int v : model.complex.vertices())
		sig.by_vertex[v] = lin.poly().coefficient(Word::letter(model.vertex_letter(v)));
	auto comps = model.complex.components();
	for (size_t k = 0; k < comps.size(); ++k)
	{
		Rational s = 0;
		for (int v : comps[k])
			s += sig.by_vertex[v];
		sig.by_component.push_back(s);
		if (s == 1)
		{
			if (sig.component)
				throw InvalidMcError("lambda_signature: two components with coefficient sum 1");
			sig.component = int(k);
		}
		else if (s != 0)
			throw InvalidMcError("lambda_signature: component coefficient sum " + to_string(s) +
			                     " is neither 0 nor 1");
	}
	return sig;
}

/// g with gauge(g, a_v) = a_base: the bch product of the edges along the
/// breadth-first tree path from base to v, an edge s -> t (s < t) entering as
/// +x_st and t -> s as -x_st.
inline LieElement vertex_witness(const Model &model, int v, int base)
{
	const auto &x = model.complex;
	if (x.component_of(v) != x.component_of(base))
		throw std::invalid_argument("vertex_witness: vertices in different components");
	const ContextPtr &ctx = model.context();
	if (v == base)
		return LieElement::zero(ctx, 0);
	std::vector<std::pair<int, int>> edges;
	for (auto &s : x.simplices())
		if (s.size() == 2)
			edges.emplace_back(s[0], s[1]);
	auto comps = x.components();
	auto parent = detail::bfs_tree(comps[size_t(x.component_of(base))], edges, base);
	std::vector<int> path{v};
	while (parent.at(path.back()) >= 0)
		path.push_back(parent.at(path.back()));
	std::reverse(path.begin(), path.end());
	std::vector<LieElement> steps;
	for (size_t j = 1; j < path.size(); ++j)
	{
		int from = path[j - 1], to = path[j];
		LieElement e = model.generator({std::min(from, to), std::max(from, to)});
		steps.push_back(from < to ? e : -e);
	}
	LieElement g = bch_product(steps);
	if (!(gauge(g, model.vertex(v), model.cdgl) == model.vertex(base)))
		throw std::logic_error("vertex_witness: verification failed");
	return g;
}

/// Composite gauge of reduction steps u_{k+1} = gauge(z_k, u_k): the bch
/// product z_m * ... * z_1, so that gauge(result, u_1) = u_{m+1}. Nonzero
/// factors must have strictly increasing filtration levels; zero factors are
/// identity steps. Empty list: 0.
inline LieElement compose_reduction(const ContextPtr &ctx, const std::vector<LieElement> &steps)
{
	int last = 0;
	LieElement w = LieElement::zero(ctx, 0);
	for (auto &z : steps)
	{
		if (z.context() != ctx)
			throw std::invalid_argument("compose_reduction: factor outside the context");
		if (z.is_zero())
			continue;
		int lvl = z.filtration_level();
		if (lvl <= last)
			throw std::invalid_argument("compose_reduction: levels must strictly increase");
		last = lvl;
		w = bch(z, w);
	}
	return w;
}

/// A path from source to target: the morphism of the interval with a -> source,
/// b -> target, x -> word; equivalently gauge(word, target) = source.
/// Its order is a lower bound for the bracket length of the word.
struct OrderRPath
{
	LieElement source, target, word;
	int order;
};

inline LieMorphism path_morphism(const LsInterval &interval, const OrderRPath &p)
{
	std::vector<LieElement> images(3);
	const ContextPtr &dst = p.source.context();
	images[size_t(interval.a)] = p.source;
	images[size_t(interval.b)] = p.target.is_zero() ? LieElement::zero(dst, -1) : p.target;
	images[size_t(interval.x)] = p.word.is_zero() ? LieElement::zero(dst, 0) : p.word;
	if (p.source.is_zero())
		images[size_t(interval.a)] = LieElement::zero(dst, -1);
	return LieMorphism(interval.cdgl.context(), dst, std::move(images));
}

/// The morphism L(a,c,y) -> L with a -> u, y -> -z, c -> -dz; a chain map
/// whenever u is Maurer-Cartan.
inline LieMorphism step_cylinder_map(const Cdgl &cylinder, const Cdgl &d, const LieElement &u,
                                      const LieElement &z)
{
	const ContextPtr &dst = d.context();
	std::vector<LieElement> images{u.is_zero() ? LieElement::zero(dst, -1) : u,
	                               z.is_zero() ? LieElement::zero(dst, -1) : -d(z),
	                               z.is_zero() ? LieElement::zero(dst, 0) : -z};
	return LieMorphism(cylinder.context(), dst, std::move(images));
}

/// For MC u and z in L^{>=r} of degree 0, the composite of the cylinder map
/// above with the interval isomorphism: a -> u, x -> -z, b -> gauge(z, u).
inline OrderRPath step_path(const Cdgl &d, const LieElement &u, const LieElement &z, int r)
{
	if (!is_mc(d, u))
		throw InvalidMcError("step_path: source is not Maurer-Cartan");
	if (z.filtration_level() < r)
		throw std::invalid_argument("step_path: z must lie in L^{>=r}");
	return {u, gauge(z, u, d), -z, r};
}

/// Order-r path from MC u = v + w with w in L^{>=r} to some v + w', w' in
/// L^{>=r+1}: solves dz = w in bracket length r and applies step_path.
/// v need not be Maurer-Cartan. nullopt when the length-r block of w is not
/// a boundary.
inline std::optional<OrderRPath> order_r_path(const Cdgl &d, const LieElement &u,
                                              const LieElement &v, int r)
{
	const ContextPtr &ctx = d.context();
	if (r < 1 || r > ctx->truncation())
		throw std::invalid_argument("order_r_path: order out of range");
	if (!is_mc(d, u))
		throw InvalidMcError("order_r_path: source is not Maurer-Cartan");
	LieElement w = u - v;
	if (w.is_zero())
		return OrderRPath{u, u, LieElement::zero(ctx, 0), r};
	if (w.filtration_level() < r)
		return std::nullopt;
	LieElement target = w.length_part(r);
	std::optional<LieElement> z;
	if (target.is_zero())
		z = LieElement::zero(ctx, 0);
	else
		z = solve_boundary(d, target, r, r);
	if (!z)
		return std::nullopt;
	OrderRPath p = step_path(d, u, *z, r);
	if ((p.target - v).filtration_level() <= r)
		throw ReductionError("order_r_path: target misses v + L^{>=r+1}");
	return p;
}

/// Sub-algebra of the decomposition target on one component's a and loop
/// generators, with da = -1/2[a,a] and dc = -[a,c].
struct LoopAlgebra
{
	Cdgl d;
	int a;
	std::vector<int> loops;
};

inline LoopAlgebra loop_algebra(const GraphDecomposition &g, int component, int truncation)
{
	std::vector<Generator> gens{{0, -1, "a"}};
	for (size_t k = 0; k < g.loop_comp.size(); ++k)
		if (g.loop_comp[k] == component)
			gens.push_back({int(gens.size()), 0, "c" + std::to_string(gens.size())});
	auto ctx = AlgebraContext::make(gens, truncation);
	LieElement a = LieElement::generator(ctx, 0);
	std::vector<LieElement> table{vertex_differential(a)};
	std::vector<int> loops;
	for (int l = 1; l < ctx->size(); ++l)
	{
		table.push_back(-bracket(a, LieElement::generator(ctx, l)));
		loops.push_back(l);
	}
	return {Cdgl(ctx, std::move(table)), 0, std::move(loops)};
}

/// theta = -ad_a - d_1, with d_1 the part of d preserving the number of
/// non-a letters. On a loop algebra d preserves that number, so theta = -d_a.
inline LieElement theta(const LoopAlgebra &l, const LieElement &e)
{
	LieElement a = LieElement::generator(l.d.context(), l.a);
	LieElement r = -l.d(e);
	r -= bracket(a, e);
	return r;
}

inline LieElement ad_power(const LieElement &a, int r, LieElement v)
{
	for (int i = 0; i < r; ++i)
		v = bracket(a, v);
	return v;
}

/// Degree -1 homology of theta on words with exactly e loop letters.
inline int theta_homology(const LoopAlgebra &l, int e)
{
	int a = l.a;
	return homology_dimension(l.d.context(), [&](const LieElement &x) { return theta(l, x); }, -1,
	                          [a, e](Word w) {
		                          int n = 0;
		                          for (int i = 0; i < w.length(); ++i)
			                          n += w[i] != a;
		                          return n == e;
	                          });
}

/// Reduction of MC elements towards a fixed target t, block by block in a
/// grading preserved or raised by d_t. Each step solves the leading block of
/// d_t z = u - t; windows of lower grades and kernel shifts are tried in
/// deterministic order until the level strictly increases.
class GradedReducer
{
	const Cdgl *d_;
	WordGrade grade_;
	bool length_grading_;
	const LinearContraction *fast_;
	int budget_;
	mutable std::mutex mutex_;
	mutable std::map<std::tuple<std::string, int, int>, std::unique_ptr<BlockSolver>> cache_;

	int level(const LieElement &e) const
	{
		int lvl = std::numeric_limits<int>::max();
		for (auto &t : e.poly().terms())
			lvl = std::min(lvl, grade_(t.word));
		return lvl;
	}

	const BlockSolver &solver(const LieElement &t, int lo, int hi) const
	{
		auto key = std::make_tuple(t.to_string(), lo, hi);
		std::lock_guard lock(mutex_);
		auto it = cache_.find(key);
		if (it != cache_.end())
			return *it->second;
		const ContextPtr &ctx = d_->context();
		auto op = [&](const LieElement &z) {
			LieElement r = (*d_)(z);
			if (!t.is_zero())
				r += bracket(t, z);
			return r;
		};
		int min_len = length_grading_ ? lo : 1;
		int max_len = length_grading_ ? hi : ctx->truncation();
		auto s = std::make_unique<BlockSolver>(ctx, op, 0, grade_, lo, hi, min_len, max_len);
		return *cache_.emplace(key, std::move(s)).first->second;
	}

  public:
	struct Step
	{
		LieElement z;
		LieElement result;
		int level; // grade of the block that was cleared
	};

	GradedReducer(const Cdgl &d, WordGrade grade, bool length_grading,
	              const LinearContraction *fast = nullptr, int budget = 64)
	    : d_(&d), grade_(std::move(grade)), length_grading_(length_grading), fast_(fast),
	      budget_(budget)
	{
	}

	int grade_level(const LieElement &e) const { return level(e); }

	/// One step at the current level; identity when u = t.
	Step step(const LieElement &u, const LieElement &t) const
	{
		const ContextPtr &ctx = d_->context();
		LieElement delta = u - t;
		if (delta.is_zero())
			return {LieElement::zero(ctx, 0), u, std::numeric_limits<int>::max()};
		int r = level(delta);
		if (r < 1)
			throw ReductionError("reduce_step: difference has a grade-0 part");
		LieElement mu = delta.filter_words([&](Word w) { return grade_(w) == r; });
		auto improves = [&](const LieElement &z, LieElement &out) {
			out = gauge(z, u, *d_);
			LieElement rest = out - t;
			return rest.is_zero() || level(rest) > r;
		};
		LieElement out;
		if (fast_ && length_grading_ && fast_->project(mu.poly()).is_zero())
		{
			auto z = fast_->solve(mu);
			if (z && improves(*z, out))
				return {*z, out, r};
		}
		int attempts = 0;
		for (int lo = r; lo >= 1 && attempts < budget_; --lo)
		{
			const BlockSolver &s = solver(t, lo, r);
			auto z = s.solve(mu);
			if (!z)
				continue;
			if (++attempts, improves(*z, out))
				return {*z, out, r};
			for (auto &k : s.kernel())
			{
				if (attempts >= budget_)
					break;
				LieElement cand = *z + k;
				if (++attempts, improves(cand, out))
					return {cand, out, r};
			}
		}
		throw ReductionError("reduce_step: no gauge clears the grade-" + std::to_string(r) +
		                     " block " + mu.to_string() + " (attempts: " +
		                     std::to_string(attempts) + ")");
	}

	/// Steps until u reaches t; returns the composite gauge.
	LieElement reduce(LieElement u, const LieElement &t, std::vector<Step> *trace = nullptr) const
	{
		const ContextPtr &ctx = d_->context();
		LieElement w = LieElement::zero(ctx, 0);
		for (int guard = 0; !(u == t); ++guard)
		{
			if (guard > 4 * ctx->truncation() + 4)
				throw ReductionError("reduce: levels failed to increase");
			Step s = step(u, t);
			w = bch(s.z, w);
			u = s.result;
			if (trace)
				trace->push_back(s);
		}
		return w;
	}
};

struct McClass
{
	enum class Kind
	{
		zero,
		component
	};
	Kind kind = Kind::zero;
	int component = -1;
	int base_vertex = -1;
	LieElement representative;
	LieElement witness; // gauge(witness, input) == representative
	bool verified = false;

	bool same_class(const McClass &o) const
	{
		return kind == o.kind && component == o.component;
	}
	std::string verdict() const
	{
		return kind == Kind::zero ? "zero" : "component " + std::to_string(component);
	}
};

struct ClassifierOptions
{
	std::optional<int> base_vertex;
	int budget = 64;
};

/// Classifies MC elements of the model of a complex up to gauge: the zero
/// class or the class of one component's base vertex. Graphs are reduced in
/// the split coordinates of their decomposition, graded by the number of
/// non-vertex letters; higher-dimensional complexes are reduced directly by
/// bracket length. Every witness is checked in the original model.
class Classifier
{
	const Model *model_;
	ClassifierOptions opts_;
	std::vector<int> bases_;
	std::optional<GraphDecomposition> decomposition_;
	std::unique_ptr<LinearContraction> contraction_;
	std::unique_ptr<GradedReducer> reducer_;

  public:
	explicit Classifier(const Model &model, ClassifierOptions opts = {})
	    : model_(&model), opts_(opts)
	{
		const auto &x = model.complex;
		if (opts_.base_vertex &&
		    !std::binary_search(x.vertices().begin(), x.vertices().end(), *opts_.base_vertex))
			throw std::invalid_argument("classifier: unknown base vertex");
		for (auto &comp : x.components())
		{
			int b = comp.front();
			if (opts_.base_vertex && std::binary_search(comp.begin(), comp.end(), *opts_.base_vertex))
				b = *opts_.base_vertex;
			bases_.push_back(b);
		}
		if (x.dimension() <= 1)
		{
			decomposition_ = graph_decomposition(model, opts_.base_vertex);
			const auto &g = *decomposition_;
			std::vector<bool> is_a(size_t(g.target.context()->size()));
			for (int l : g.a_letter)
				is_a[size_t(l)] = true;
			WordGrade e_grade = [is_a](Word w) {
				int e = 0;
				for (int i = 0; i < w.length(); ++i)
					e += !is_a[size_t(w[i])];
				return e;
			};
			reducer_ = std::make_unique<GradedReducer>(g.target, e_grade, false, nullptr, opts_.budget);
		}
		else
		{
			contraction_ = std::make_unique<LinearContraction>(model.cdgl);
			reducer_ = std::make_unique<GradedReducer>(model.cdgl, bracket_length, true,
			                                           contraction_.get(), opts_.budget);
		}
	}

	const Model &model() const { return *model_; }
	const std::vector<int> &bases() const { return bases_; }
	const std::optional<GraphDecomposition> &decomposition() const { return decomposition_; }

	LieElement representative(std::optional<int> component) const
	{
		if (!component)
			return LieElement::zero(model_->context(), -1);
		return model_->vertex(bases_[size_t(*component)]);
	}

	/// One reduction step in the working coordinates.
	GradedReducer::Step reduce_step(const LieElement &u, const LieElement &target) const
	{
		if (decomposition_)
		{
			const auto &g = *decomposition_;
			auto s = reducer_->step(g.phi(u), g.phi(target));
			return {g.phi_inv(s.z), g.phi_inv(s.result), s.level};
		}
		return reducer_->step(u, target);
	}

	McClass classify(const LieElement &u) const
	{
		const ContextPtr &ctx = model_->context();
		if (u.context() != ctx)
			throw std::invalid_argument("classify: element outside the model");
		LambdaSignature sig = lambda_signature(*model_, u);
		McClass out;
		out.representative = representative(sig.component);
		if (sig.component)
		{
			out.kind = McClass::Kind::component;
			out.component = *sig.component;
			out.base_vertex = bases_[size_t(*sig.component)];
		}
		// a lone vertex coefficient is moved to the base along the tree first
		LieElement pre = LieElement::zero(ctx, 0);
		if (sig.component)
		{
			std::vector<int> support;
			for (auto &[v, c] : sig.by_vertex)
				if (c != 0)
					support.push_back(v);
			if (support.size() == 1 && support[0] != out.base_vertex)
				pre = vertex_witness(*model_, support[0], out.base_vertex);
		}
		LieElement u1 = gauge(pre, u, model_->cdgl);
		LieElement w;
		if (decomposition_)
		{
			const auto &g = *decomposition_;
			LieElement wt = reducer_->reduce(g.phi(u1), g.phi(out.representative));
			w = g.phi_inv(wt);
		}
		else
			w = reducer_->reduce(u1, out.representative);
		out.witness = bch(w, pre);
		if (!(gauge(out.witness, u, model_->cdgl) == out.representative))
			throw ReductionError("classify: witness verification failed");
		out.verified = true;
		return out;
	}
};

struct Pi0Report
{
	int components = 0;
	McClass zero_class;
	std::vector<std::pair<int, McClass>> vertex_classes;
	std::vector<McClass> classes; // distinct, zero first

	bool pass() const { return int(classes.size()) == components + 1; }
};

inline Pi0Report pi0_classes(const Classifier &c)
{
	const Model &m = c.model();
	Pi0Report r;
	r.components = int(m.complex.components().size());
	r.zero_class = c.classify(LieElement::zero(m.context(), -1));
	r.classes.push_back(r.zero_class);
	for (int v : m.complex.vertices())
	{
		McClass k = c.classify(m.vertex(v));
		r.vertex_classes.emplace_back(v, k);
		if (std::none_of(r.classes.begin(), r.classes.end(),
		                 [&](const McClass &o) { return o.same_class(k); }))
			r.classes.push_back(k);
	}
	return r;
}

inline nlohmann::ordered_json class_report(const LieElement &input, const McClass &k)
{
	nlohmann::ordered_json verdict;
	if (k.kind == McClass::Kind::zero)
		verdict = "zero";
	else
		verdict = {{"component", k.component}};
	return {{"input", input.to_string()},
	        {"verdict", verdict},
	        {"witness", k.witness.to_string()},
	        {"truncation", input.truncation()},
	        {"verified", k.verified}};
}

/// The element in a model of lower truncation with the same letters.
inline LieElement restrict_truncation(const LieElement &e, const Model &smaller)
{
	std::vector<int> id(size_t(e.context()->size()));
	std::iota(id.begin(), id.end(), 0);
	return transport(e, smaller.context(), id);
}

} // namespace cdgl
