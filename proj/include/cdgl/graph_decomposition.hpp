#pragma once

#include "cdgl/models.hpp"

#include <deque>
#include <optional>

namespace cdgl {

/// Coordinates of the model of a graph in which every component splits as
/// L(a) with da = -1/2[a,a], contractible pairs (u_i, v_i) with du = 0,
/// dv = u, and loop generators with dc = -[a,c].
///
/// Three algebras are involved: the model X itself; L' on the vertices a_v,
/// path gauges p_i (one per non-base vertex) and loop gauges c_k; and the
/// target T on a (per component), u_i, v_i, c_k. Then f : L' -> X sends
/// generators to their defining elements, psi : L' -> T is the cylinder map
/// on every pair (a_i, p_i), and phi = psi f^{-1} : X -> T.
struct GraphDecomposition
{
	struct Component
	{
		int base;
		std::vector<int> vertices;
		std::vector<std::pair<int, int>> tree_edges; // (s, t) with s < t
		std::vector<std::pair<int, int>> loop_edges;
	};

	std::vector<Component> components;
	std::vector<int> path_vertex;   // non-base vertex of each p_i
	std::vector<int> path_comp;     // component of each p_i
	std::vector<int> loop_comp;     // component of each c_k
	std::vector<std::pair<int, int>> loop_edge;

	std::vector<LieElement> p; // in X; gauge(p_i, a_i) = a_base
	std::vector<LieElement> c; // in X; gauge(c_k, a_base) = a_base

	Cdgl prime;  // L'
	Cdgl target; // T
	LieMorphism f, f_inv, psi, phi, phi_inv;

	// letters in T
	std::vector<int> a_letter, u_letter, v_letter, c_letter;
	// letters in L'
	std::vector<int> prime_p_letter, prime_c_letter;

	int component_of_vertex(int v) const
	{
		for (size_t k = 0; k < components.size(); ++k)
			for (int w : components[k].vertices)
				if (w == v)
					return int(k);
		throw std::invalid_argument("vertex not in complex: " + std::to_string(v));
	}
};

namespace detail {

inline bool is_identity(const LieMorphism &m)
{
	if (m.source() != m.target())
		return false;
	for (int g = 0; g < m.source()->size(); ++g)
		if (!(m.image(g) == LieElement::generator(m.source(), g)))
			return false;
	return true;
}

// BFS tree; returns for each vertex its parent (-1 at the root)
inline std::map<int, int> bfs_tree(const std::vector<int> &vertices,
                                   const std::vector<std::pair<int, int>> &edges, int root)
{
	std::map<int, std::vector<int>> adj;
	for (int v : vertices)
		adj[v];
	for (auto [s, t] : edges)
	{
		adj[s].push_back(t);
		adj[t].push_back(s);
	}
	for (auto &[v, nb] : adj)
		std::sort(nb.begin(), nb.end());
	std::map<int, int> parent{{root, -1}};
	std::deque<int> queue{root};
	while (!queue.empty())
	{
		int v = queue.front();
		queue.pop_front();
		for (int w : adj[v])
			if (!parent.count(w))
			{
				parent[w] = v;
				queue.push_back(w);
			}
	}
	return parent;
}

} // namespace detail

/// Builds and verifies the decomposition of the model of a complex of
/// dimension <= 1. `base_vertex` selects the base of its component; other
/// components use their smallest vertex.
inline GraphDecomposition graph_decomposition(const Model &model,
                                              std::optional<int> base_vertex = std::nullopt)
{
	const SimplicialComplex &x = model.complex;
	if (x.dimension() > 1)
		throw std::invalid_argument("graph_decomposition: complex has dimension > 1");
	const ContextPtr &xc = model.context();
	int n = xc->truncation();
	const Cdgl &dx = model.cdgl;

	GraphDecomposition g;
	std::vector<std::pair<int, int>> edges;
	for (auto &s : x.simplices())
		if (s.size() == 2)
			edges.emplace_back(s[0], s[1]);

	if (base_vertex && !std::binary_search(x.vertices().begin(), x.vertices().end(), *base_vertex))
		throw std::invalid_argument("graph_decomposition: unknown base vertex");

	std::map<int, LieElement> p_of; // vertex -> path gauge
	for (auto &members : x.components())
	{
		GraphDecomposition::Component comp;
		comp.vertices = members;
		comp.base = members.front();
		if (base_vertex && std::binary_search(members.begin(), members.end(), *base_vertex))
			comp.base = *base_vertex;
		std::vector<std::pair<int, int>> local;
		for (auto e : edges)
			if (std::binary_search(members.begin(), members.end(), e.first))
				local.push_back(e);
		auto parent = detail::bfs_tree(members, local, comp.base);
		std::set<std::pair<int, int>> tree;
		for (auto [v, par] : parent)
			if (par >= 0)
				tree.insert({std::min(v, par), std::max(v, par)});
		for (auto e : local)
			(tree.count(e) ? comp.tree_edges : comp.loop_edges).push_back(e);

		// p_v = bch of steps base -> v; a step s -> t is +x_st, t -> s is -x_st
		int k = int(g.components.size());
		for (int v : members)
		{
			if (v == comp.base)
				continue;
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
			p_of.emplace(v, bch_product(steps));
			g.path_vertex.push_back(v);
			g.path_comp.push_back(k);
		}
		auto path_gauge = [&](int v) {
			return v == comp.base ? LieElement::zero(xc, 0) : p_of.at(v);
		};
		for (auto [s, t] : comp.loop_edges)
		{
			g.c.push_back(bch_product({path_gauge(s), model.generator({s, t}), -path_gauge(t)}));
			g.loop_comp.push_back(k);
			g.loop_edge.emplace_back(s, t);
		}
		g.components.push_back(std::move(comp));
	}
	for (int v : g.path_vertex)
		g.p.push_back(p_of.at(v));

	// L': a_v, then p_i, then c_k
	std::vector<Generator> pg;
	for (int v : x.vertices())
		pg.push_back({int(pg.size()), -1, "a" + std::to_string(v)});
	for (int v : g.path_vertex)
	{
		g.prime_p_letter.push_back(int(pg.size()));
		pg.push_back({int(pg.size()), 0, "p" + std::to_string(v)});
	}
	for (size_t k = 0; k < g.c.size(); ++k)
	{
		g.prime_c_letter.push_back(int(pg.size()));
		pg.push_back({int(pg.size()), 0, "c" + std::to_string(k + 1)});
	}
	ContextPtr lp = AlgebraContext::make(pg, n);
	auto prime_vertex = [&](int v) {
		auto it = std::lower_bound(x.vertices().begin(), x.vertices().end(), v);
		return LieElement::generator(lp, int(it - x.vertices().begin()));
	};
	std::vector<LieElement> ptable, fimages;
	for (int v : x.vertices())
	{
		ptable.push_back(vertex_differential(prime_vertex(v)));
		fimages.push_back(model.vertex(v));
	}
	for (size_t i = 0; i < g.path_vertex.size(); ++i)
	{
		int v = g.path_vertex[i];
		LieElement pv = LieElement::generator(lp, g.prime_p_letter[i]);
		LieElement base = prime_vertex(g.components[size_t(g.path_comp[i])].base);
		// gauge(p, a_v) = a_base
		ptable.push_back(edge_differential(pv, base, prime_vertex(v)));
		fimages.push_back(g.p[i]);
	}
	for (size_t k = 0; k < g.c.size(); ++k)
	{
		LieElement ck = LieElement::generator(lp, g.prime_c_letter[k]);
		LieElement base = prime_vertex(g.components[size_t(g.loop_comp[k])].base);
		ptable.push_back(-bracket(base, ck));
		fimages.push_back(g.c[k]);
	}
	g.prime = Cdgl(lp, ptable);
	g.f = LieMorphism(lp, xc, fimages);
	if (!all_zero(chain_map_residues(g.f, g.prime, dx)))
		throw std::logic_error("graph_decomposition: f is not a chain map");
	g.f_inv = invert(g.f);
	if (!detail::is_identity(compose(g.f_inv, g.f)) || !detail::is_identity(compose(g.f, g.f_inv)))
		throw std::logic_error("graph_decomposition: f is not invertible to order N");

	// T: a per component, then u_i, v_i, then c_k
	bool single = g.components.size() == 1;
	std::vector<Generator> tg;
	for (size_t k = 0; k < g.components.size(); ++k)
	{
		g.a_letter.push_back(int(tg.size()));
		tg.push_back({int(tg.size()), -1, single ? std::string("a") : "a" + std::to_string(k)});
	}
	for (int v : g.path_vertex)
	{
		g.u_letter.push_back(int(tg.size()));
		tg.push_back({int(tg.size()), -1, "u" + std::to_string(v)});
	}
	for (int v : g.path_vertex)
	{
		g.v_letter.push_back(int(tg.size()));
		tg.push_back({int(tg.size()), 0, "v" + std::to_string(v)});
	}
	for (size_t k = 0; k < g.c.size(); ++k)
	{
		g.c_letter.push_back(int(tg.size()));
		tg.push_back({int(tg.size()), 0, "c" + std::to_string(k + 1)});
	}
	ContextPtr tc = AlgebraContext::make(tg, n);
	auto tgen = [&](int l) { return LieElement::generator(tc, l); };
	std::vector<LieElement> ttable(size_t(tc->size()));
	for (size_t k = 0; k < g.components.size(); ++k)
		ttable[size_t(g.a_letter[k])] = vertex_differential(tgen(g.a_letter[k]));
	for (size_t i = 0; i < g.path_vertex.size(); ++i)
	{
		ttable[size_t(g.u_letter[i])] = LieElement::zero(tc, -2);
		ttable[size_t(g.v_letter[i])] = tgen(g.u_letter[i]);
	}
	for (size_t k = 0; k < g.c.size(); ++k)
		ttable[size_t(g.c_letter[k])] =
		    -bracket(tgen(g.a_letter[size_t(g.loop_comp[k])]), tgen(g.c_letter[k]));
	g.target = Cdgl(tc, ttable);

	// psi: a_base -> a, a_v -> (-v).a, p -> v, c -> c
	std::vector<LieElement> psi_images;
	for (int v : x.vertices())
	{
		int k = g.component_of_vertex(v);
		LieElement a = tgen(g.a_letter[size_t(k)]);
		auto it = std::find(g.path_vertex.begin(), g.path_vertex.end(), v);
		if (it == g.path_vertex.end())
			psi_images.push_back(a);
		else
			psi_images.push_back(
			    gauge(-tgen(g.v_letter[size_t(it - g.path_vertex.begin())]), a, g.target));
	}
	for (size_t i = 0; i < g.path_vertex.size(); ++i)
		psi_images.push_back(tgen(g.v_letter[i]));
	for (size_t k = 0; k < g.c.size(); ++k)
		psi_images.push_back(tgen(g.c_letter[k]));
	g.psi = LieMorphism(lp, tc, psi_images);
	if (!all_zero(chain_map_residues(g.psi, g.prime, g.target)))
		throw std::logic_error("graph_decomposition: psi is not a chain map");

	// phi^{-1}: a -> a_base, u_i -> d f(p_i), v_i -> f(p_i), c_k -> f(c_k)
	std::vector<LieElement> inv_images(size_t(tc->size()));
	for (size_t k = 0; k < g.components.size(); ++k)
		inv_images[size_t(g.a_letter[k])] = model.vertex(g.components[k].base);
	for (size_t i = 0; i < g.path_vertex.size(); ++i)
	{
		inv_images[size_t(g.u_letter[i])] = dx(g.p[i]);
		inv_images[size_t(g.v_letter[i])] = g.p[i];
	}
	for (size_t k = 0; k < g.c.size(); ++k)
		inv_images[size_t(g.c_letter[k])] = g.c[k];
	g.phi_inv = LieMorphism(tc, xc, inv_images);
	g.phi = compose(g.psi, g.f_inv);
	if (!detail::is_identity(compose(g.phi, g.phi_inv)) ||
	    !detail::is_identity(compose(g.phi_inv, g.phi)))
		throw std::logic_error("graph_decomposition: phi and its inverse disagree");
	if (!all_zero(chain_map_residues(g.phi, dx, g.target)))
		throw std::logic_error("graph_decomposition: phi is not a chain map");
	return g;
}

} // namespace cdgl
