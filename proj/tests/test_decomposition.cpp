#include "cdgl/graph_decomposition.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace cdgl;

namespace {

Model sample_model(const std::string &name, int n)
{
	std::ifstream in(std::string(CDGL_SAMPLES) + "/" + name + ".json");
	return build_model(load_complex(nlohmann::json::parse(in)), n);
}

bool identity_on_generators(const LieMorphism &m)
{
	for (int g = 0; g < m.source()->size(); ++g)
		if (!(m.image(g) == LieElement::generator(m.source(), g)))
			return false;
	return true;
}

// the identities every decomposition must satisfy, checked from scratch
void check_identities(const Model &m, const GraphDecomposition &g)
{
	const Cdgl &d = m.cdgl;
	const auto &tc = g.target.context();
	EXPECT_TRUE(identity_on_generators(compose(g.f_inv, g.f)));
	EXPECT_TRUE(identity_on_generators(compose(g.f, g.f_inv)));
	EXPECT_TRUE(identity_on_generators(compose(g.phi, g.phi_inv)));
	EXPECT_TRUE(identity_on_generators(compose(g.phi_inv, g.phi)));
	EXPECT_TRUE(all_zero(chain_map_residues(g.phi, d, g.target)));
	EXPECT_TRUE(all_zero(chain_map_residues(g.phi_inv, g.target, d)));
	EXPECT_TRUE(g.target.check_d_squared().clean());

	for (size_t i = 0; i < g.path_vertex.size(); ++i)
	{
		auto u = LieElement::generator(tc, g.u_letter[i]), v = LieElement::generator(tc, g.v_letter[i]);
		EXPECT_TRUE(g.target(u).is_zero());
		EXPECT_EQ(g.target(v), u);
		int base = g.components[size_t(g.path_comp[i])].base;
		EXPECT_EQ(gauge(g.p[i], m.vertex(g.path_vertex[i]), d), m.vertex(base));
		// perturbed by the component's a: d_a(v) = u + [a,v]
		auto a = LieElement::generator(tc, g.a_letter[size_t(g.path_comp[i])]);
		EXPECT_EQ(perturb(g.target, a)(v), u + bracket(a, v));
	}
	for (size_t k = 0; k < g.c.size(); ++k)
	{
		auto a = LieElement::generator(tc, g.a_letter[size_t(g.loop_comp[k])]);
		auto c = LieElement::generator(tc, g.c_letter[k]);
		EXPECT_EQ(g.target(c), -bracket(a, c));
		EXPECT_TRUE(perturb(g.target, a)(c).is_zero());
		// in the model itself the loop gauge fixes the base point
		LieElement base = m.vertex(g.components[size_t(g.loop_comp[k])].base);
		EXPECT_EQ(d(g.c[k]), -bracket(base, g.c[k]));
		EXPECT_EQ(gauge(g.c[k], base, d), base);
	}
}

} // namespace

TEST(Decomposition, CircleHasOneLoop)
{
	for (auto name : {"circle3", "circle4"})
		for (int n = 2; n <= 5; ++n)
		{
			Model m = sample_model(name, n);
			auto g = graph_decomposition(m);
			ASSERT_EQ(g.components.size(), 1u);
			EXPECT_EQ(g.c.size(), 1u);
			EXPECT_EQ(g.path_vertex.size(), m.complex.vertices().size() - 1);
			check_identities(m, g);
		}
}

TEST(Decomposition, SegmentHasOnePairAndNoLoop)
{
	for (int n = 1; n <= 6; ++n)
	{
		Model m = sample_model("segment", n);
		auto g = graph_decomposition(m);
		EXPECT_EQ(g.path_vertex.size(), 1u);
		EXPECT_TRUE(g.c.empty());
		EXPECT_EQ(g.target.context()->size(), 3);
		// with a single edge the path gauge is the edge itself
		EXPECT_EQ(g.p[0], m.generator({0, 1}));
		check_identities(m, g);
	}
}

TEST(Decomposition, ThetaHasTwoLoops)
{
	for (int n = 2; n <= 4; ++n)
	{
		Model m = sample_model("theta", n);
		auto g = graph_decomposition(m);
		EXPECT_EQ(g.c.size(), 2u);
		EXPECT_EQ(g.components[0].tree_edges.size(), 3u);
		check_identities(m, g);
	}
}

TEST(Decomposition, DisconnectedGraph)
{
	Model m = sample_model("two_segments", 4);
	auto g = graph_decomposition(m);
	ASSERT_EQ(g.components.size(), 2u);
	EXPECT_EQ(g.components[0].base, 0);
	EXPECT_EQ(g.components[1].base, 2);
	EXPECT_EQ(g.path_vertex, (std::vector<int>{1, 3}));
	check_identities(m, g);
}

TEST(Decomposition, IsolatedPointsAndEmpty)
{
	Model pts = sample_model("two_points", 3);
	auto g = graph_decomposition(pts);
	EXPECT_EQ(g.components.size(), 2u);
	EXPECT_TRUE(g.path_vertex.empty());
	check_identities(pts, g);
	Model empty = sample_model("empty", 3);
	EXPECT_TRUE(graph_decomposition(empty).components.empty());
}

TEST(Decomposition, BaseVertexChoice)
{
	Model m = sample_model("path3", 4);
	auto g = graph_decomposition(m, 2);
	EXPECT_EQ(g.components[0].base, 2);
	EXPECT_EQ(g.path_vertex, (std::vector<int>{0, 1}));
	check_identities(m, g);
	EXPECT_THROW(graph_decomposition(m, 7), std::invalid_argument);
}

TEST(Decomposition, RejectsHigherDimension)
{
	EXPECT_THROW(graph_decomposition(sample_model("delta2", 2)), std::invalid_argument);
}

TEST(Decomposition, TreePathUsesInverseAgainstOrientation)
{
	// base 2 on the path 0-1-2 reaches 0 through x1_2 and x0_1 backwards
	Model m = sample_model("path3", 4);
	auto g = graph_decomposition(m, 2);
	EXPECT_EQ(g.p[0], bch(-m.generator({1, 2}), -m.generator({0, 1})));
}
