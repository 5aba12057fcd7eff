#pragma once

#include <json.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdgl {

class ComplexError : public std::runtime_error
{
	using std::runtime_error::runtime_error;
};

using Simplex = std::vector<int>; // ascending vertex ids

/// Finite simplicial complex closed under faces. Simplices are ordered by
/// dimension, then lexicographically.
class SimplicialComplex
{
	std::vector<int> vertices_;
	std::vector<Simplex> facets_;
	std::vector<Simplex> simplices_;

  public:
	SimplicialComplex() = default;
	SimplicialComplex(std::vector<int> vertices, std::vector<Simplex> facets)
	    : vertices_(std::move(vertices)), facets_(std::move(facets))
	{
		std::sort(vertices_.begin(), vertices_.end());
		if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
			throw ComplexError("duplicate vertex");
		std::set<Simplex> all;
		for (auto &v : vertices_)
			all.insert({v});
		for (auto &f : facets_)
		{
			if (f.empty())
				throw ComplexError("empty facet");
			std::sort(f.begin(), f.end());
			if (std::adjacent_find(f.begin(), f.end()) != f.end())
				throw ComplexError("facet repeats a vertex");
			for (int v : f)
				if (!std::binary_search(vertices_.begin(), vertices_.end(), v))
					throw ComplexError("facet references unknown vertex " + std::to_string(v));
			if (f.size() > 20)
				throw ComplexError("facet dimension too large");
			uint32_t n = uint32_t(f.size());
			for (uint32_t mask = 1; mask < (1u << n); ++mask)
			{
				Simplex s;
				for (uint32_t i = 0; i < n; ++i)
					if (mask & (1u << i))
						s.push_back(f[i]);
				all.insert(std::move(s));
			}
		}
		simplices_.assign(all.begin(), all.end());
		std::stable_sort(simplices_.begin(), simplices_.end(),
		                 [](const Simplex &x, const Simplex &y) { return x.size() < y.size(); });
	}

	/// The standard simplex on vertices 0..n.
	static SimplicialComplex standard(int n)
	{
		if (n < 0)
			throw ComplexError("negative simplex dimension");
		std::vector<int> v(size_t(n + 1));
		std::iota(v.begin(), v.end(), 0);
		return {v, {v}};
	}

	const std::vector<int> &vertices() const { return vertices_; }
	const std::vector<Simplex> &facets() const { return facets_; }
	const std::vector<Simplex> &simplices() const { return simplices_; }

	int dimension() const
	{
		return simplices_.empty() ? -1 : int(simplices_.back().size()) - 1;
	}

	bool contains(const Simplex &s) const
	{
		return std::binary_search(simplices_.begin(), simplices_.end(), s,
		                          [](const Simplex &x, const Simplex &y) {
			                          if (x.size() != y.size())
				                          return x.size() < y.size();
			                          return x < y;
		                          });
	}

	/// Components of the 1-skeleton, each sorted, ordered by smallest vertex.
	std::vector<std::vector<int>> components() const
	{
		std::map<int, int> parent;
		for (int v : vertices_)
			parent[v] = v;
		auto find = [&](int v) {
			while (parent[v] != v)
				v = parent[v] = parent[parent[v]];
			return v;
		};
		for (auto &s : simplices_)
			if (s.size() == 2)
			{
				int a = find(s[0]), b = find(s[1]);
				if (a != b)
					parent[std::max(a, b)] = std::min(a, b);
			}
		std::map<int, std::vector<int>> groups;
		for (int v : vertices_)
			groups[find(v)].push_back(v);
		std::vector<std::vector<int>> out;
		for (auto &[root, members] : groups)
			out.push_back(std::move(members));
		return out;
	}

	int component_of(int v) const
	{
		auto comps = components();
		for (size_t i = 0; i < comps.size(); ++i)
			if (std::binary_search(comps[i].begin(), comps[i].end(), v))
				return int(i);
		throw ComplexError("unknown vertex " + std::to_string(v));
	}

	nlohmann::ordered_json to_json() const
	{
		return {{"vertices", vertices_}, {"facets", facets_}};
	}
};

inline SimplicialComplex load_complex(const nlohmann::json &doc)
{
	if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("facets"))
		throw ComplexError("complex document needs \"vertices\" and \"facets\"");
	const auto &vs = doc["vertices"];
	const auto &fs = doc["facets"];
	if (!vs.is_array() || !fs.is_array())
		throw ComplexError("\"vertices\" and \"facets\" must be arrays");
	std::vector<int> vertices;
	for (auto &v : vs)
	{
		if (!v.is_number_integer())
			throw ComplexError("vertex ids must be integers");
		vertices.push_back(v.get<int>());
	}
	std::vector<Simplex> facets;
	for (auto &f : fs)
	{
		if (!f.is_array())
			throw ComplexError("each facet must be an array");
		Simplex s;
		for (auto &v : f)
		{
			if (!v.is_number_integer())
				throw ComplexError("facet entries must be integers");
			s.push_back(v.get<int>());
		}
		facets.push_back(std::move(s));
	}
	return {std::move(vertices), std::move(facets)};
}

inline SimplicialComplex load_complex_text(const std::string &text)
{
	nlohmann::json doc;
	try
	{
		doc = nlohmann::json::parse(text);
	}
	catch (const nlohmann::json::parse_error &e)
	{
		throw ComplexError(std::string("malformed JSON: ") + e.what());
	}
	return load_complex(doc);
}

} // namespace cdgl
