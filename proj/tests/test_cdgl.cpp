#include "cdgl/models.hpp"
#include "cdgl/random.hpp"

#include <gtest/gtest.h>

using namespace cdgl;

namespace {

Rational sign(int degree) { return degree % 2 == 0 ? 1 : -1; }

// L(a,c) with da = -1/2[a,a], dc = -[a,c]: one loop based at a vertex.
Cdgl one_loop(int n)
{
	auto ctx = AlgebraContext::make({{0, -1, "a"}, {1, 0, "c"}}, n);
	auto a = LieElement::generator(ctx, "a"), c = LieElement::generator(ctx, "c");
	return Cdgl(ctx, {vertex_differential(a), -bracket(a, c)});
}

} // namespace

TEST(ApplyD, VertexGenerator)
{
	Model m = build_simplex_model(1, 4);
	auto a = m.vertex(0);
	EXPECT_EQ(m.cdgl(a), bracket(a, a) * Rational(-1, 2));
	EXPECT_TRUE(m.cdgl(LieElement::zero(m.context(), 0)).is_zero());
}

TEST(ApplyD, DerivationLawOnRandomPairs)
{
	Model m = build_simplex_model(2, 5);
	const auto &ctx = m.context();
	const Cdgl &d = m.cdgl;
	std::mt19937_64 rng(21);
	for (int i = 0; i < 40; ++i)
	{
		int du = int(draw(rng, 3)) - 1, dv = int(draw(rng, 3)) - 1;
		LieElement u = random_element(ctx, du, 1, 2, rng, 3);
		LieElement v = random_element(ctx, dv, 1, 2, rng, 3);
		if (u.is_zero() || v.is_zero())
			continue;
		LieElement r = d(bracket(u, v)) - bracket(d(u), v);
		r.add_scaled(bracket(u, d(v)), -sign(du));
		EXPECT_TRUE(r.is_zero());
	}
}

TEST(ApplyD, RejectsForeignElement)
{
	Model m = build_simplex_model(0, 3);
	auto other = AlgebraContext::make({{0, -1, "a0"}}, 3);
	EXPECT_THROW(m.cdgl(LieElement::generator(other, 0)), std::invalid_argument);
}

TEST(DSquared, IntervalIsCleanAtEight)
{
	auto li = ls_interval(8);
	EXPECT_TRUE(li.cdgl.check_d_squared().clean());
}

TEST(DSquared, TwoTermTable)
{
	auto ctx = AlgebraContext::make({{0, 0, "x"}, {1, -1, "y"}}, 3);
	Cdgl d(ctx, {LieElement::generator(ctx, "y"), LieElement::zero(ctx, -2)});
	EXPECT_TRUE(d.check_d_squared().clean());
}

TEST(DSquared, CorruptedTableReportsResidueAtX)
{
	// d(y) must drop degree, so the corruption uses [y,y] in place of y
	auto ctx = AlgebraContext::make({{0, 0, "x"}, {1, -1, "y"}}, 3);
	auto y = LieElement::generator(ctx, "y");
	std::vector<LieElement> table{y, bracket(y, y)};
	EXPECT_THROW(Cdgl(ctx, table), std::runtime_error);
	Cdgl d(ctx, table, Cdgl::Verify::no);
	auto report = d.check_d_squared();
	ASSERT_EQ(report.residues.size(), 1u);
	EXPECT_EQ(report.residues[0].first, 0);
	EXPECT_EQ(report.residues[0].second, bracket(y, y));
}

TEST(DSquared, WrongDegreeIsRejected)
{
	auto ctx = AlgebraContext::make({{0, 0, "x"}, {1, -1, "y"}}, 3);
	auto y = LieElement::generator(ctx, "y");
	EXPECT_THROW(Cdgl(ctx, {y, y}, Cdgl::Verify::no), std::invalid_argument);
}

TEST(IsMc, Examples)
{
	Model m = build_simplex_model(1, 4);
	EXPECT_TRUE(is_mc(m.cdgl, LieElement::zero(m.context(), -1)));
	EXPECT_TRUE(is_mc(m.cdgl, m.vertex(0)));
	EXPECT_TRUE(is_mc(m.cdgl, m.vertex(1)));
	EXPECT_FALSE(is_mc(m.cdgl, m.vertex(0) + m.vertex(1)));
	EXPECT_THROW(is_mc(m.cdgl, m.generator({0, 1})), std::invalid_argument);
}

TEST(Perturb, ByZeroIsD)
{
	Model m = build_simplex_model(2, 4);
	auto da = perturb(m.cdgl, LieElement::zero(m.context(), -1));
	for (int g = 0; g < m.context()->size(); ++g)
	{
		auto e = LieElement::generator(m.context(), g);
		EXPECT_EQ(da(e), m.cdgl(e));
	}
}

TEST(Perturb, RequiresMc)
{
	Model m = build_simplex_model(1, 3);
	EXPECT_THROW(perturb(m.cdgl, m.vertex(0) + m.vertex(1)), std::invalid_argument);
}

TEST(Perturb, SquaresToZeroAtMcPoints)
{
	Model m = build_simplex_model(2, 4);
	std::mt19937_64 rng(6);
	for (int v = 0; v < 3; ++v)
	{
		EXPECT_TRUE(perturb(m.cdgl, m.vertex(v)).check_square().clean());
		LieElement x = random_element(m.context(), 0, 1, 2, rng, 3);
		EXPECT_TRUE(perturb(m.cdgl, gauge(x, m.vertex(v), m.cdgl)).check_square().clean());
	}
}

TEST(Perturb, LoopGeneratorIsClosed)
{
	Cdgl d = one_loop(4);
	auto a = LieElement::generator(d.context(), "a"), c = LieElement::generator(d.context(), "c");
	EXPECT_TRUE(perturb(d, a)(c).is_zero());
}

TEST(SolveBoundary, SelfBracketOfVertex)
{
	auto ctx = AlgebraContext::make({{0, -1, "a"}}, 3);
	auto a = LieElement::generator(ctx, "a");
	Cdgl d(ctx, {vertex_differential(a)});
	auto w = solve_boundary(d, bracket(a, a), 1, 2);
	ASSERT_TRUE(w);
	EXPECT_EQ(*w, a * Rational(-2));
}

TEST(SolveBoundary, ZeroTarget)
{
	Model m = build_simplex_model(1, 3);
	auto w = solve_boundary(m.cdgl, LieElement::zero(m.context(), -1), 1, 3);
	ASSERT_TRUE(w);
	EXPECT_TRUE(w->is_zero());
}

TEST(SolveBoundary, LoopBracket)
{
	Cdgl d = one_loop(4);
	auto a = LieElement::generator(d.context(), "a"), c = LieElement::generator(d.context(), "c");
	auto w = solve_boundary(d, bracket(a, c), 1, 2);
	ASSERT_TRUE(w);
	EXPECT_EQ(*w, -c);
}

TEST(SolveBoundary, InconsistentSystemGivesNone)
{
	Cdgl d = one_loop(4);
	auto a = LieElement::generator(d.context(), "a");
	// the only degree 0 generator is c, and d(c) has length 2
	EXPECT_FALSE(solve_boundary(d, a, 1, 1));
}

TEST(SolveBoundary, ReproducesTargetOnRandomBoundaries)
{
	Model m = build_simplex_model(2, 4);
	const auto &ctx = m.context();
	std::mt19937_64 rng(12);
	for (int i = 0; i < 20; ++i)
	{
		int r = 1 + int(draw(rng, 3));
		LieElement w = random_element(ctx, 0, r, r, rng, 3);
		LieElement target = m.cdgl(w).length_part(r);
		auto sol = solve_boundary(m.cdgl, target, r, r);
		ASSERT_TRUE(sol);
		EXPECT_EQ(m.cdgl(*sol).length_part(r), target);
		for (int len = 1; len < r; ++len)
			EXPECT_TRUE(m.cdgl(*sol).length_part(len).is_zero());
	}
}

TEST(HomologyBlock, ZeroDifferentialGivesBlockDimension)
{
	auto ctx = AlgebraContext::make({{0, -1, "a"}, {1, -1, "b"}}, 3);
	Cdgl d(ctx, {LieElement::zero(ctx, -2), LieElement::zero(ctx, -2)});
	EXPECT_EQ(homology_block(d, -1, 1), 2);
	EXPECT_EQ(homology_block(d, -2, 2), 3);
}

TEST(HomologyBlock, TwoTermIsomorphismIsAcyclic)
{
	auto ctx = AlgebraContext::make({{0, 0, "x"}, {1, -1, "y"}}, 3);
	Cdgl d(ctx, {LieElement::generator(ctx, "y"), LieElement::zero(ctx, -2)});
	EXPECT_EQ(homology_block(d, 0, 1), 0);
	EXPECT_EQ(homology_block(d, -1, 1), 0);
	EXPECT_THROW(homology_block(d, 0, 4), std::invalid_argument);
}

TEST(HomologyBlock, SimplexLinearPartHasOnlyThePointClass)
{
	for (int m = 1; m <= 3; ++m)
	{
		Model model = build_simplex_model(m, 2);
		EXPECT_EQ(homology_block(model.cdgl, -1, 1), 1) << m;
		for (int deg = 0; deg <= m - 1; ++deg)
			EXPECT_EQ(homology_block(model.cdgl, deg, 1), 0) << m << " " << deg;
	}
}
