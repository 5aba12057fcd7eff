#include "cdgl/lie_element.hpp"
#include "cdgl/random.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace cdgl;

namespace {

// Independent oracle: noncommutative polynomials as maps from letter vectors
// to coefficients, graded commutators with Koszul signs, dense elimination.
using Poly = std::map<std::vector<int>, Rational>;

struct Oracle
{
	std::vector<int> degrees;

	int degree(const std::vector<int> &w) const
	{
		int d = 0;
		for (int l : w)
			d += degrees[size_t(l)];
		return d;
	}

	Poly commutator(const Poly &p, int dp, const Poly &q, int dq) const
	{
		Poly out;
		Rational sign = (dp * dq) % 2 == 0 ? 1 : -1;
		for (auto &[u, cu] : p)
			for (auto &[v, cv] : q)
			{
				std::vector<int> uv = u, vu = v;
				uv.insert(uv.end(), v.begin(), v.end());
				vu.insert(vu.end(), u.begin(), u.end());
				out[uv] += cu * cv;
				out[vu] -= sign * cu * cv;
			}
		std::erase_if(out, [](auto &kv) { return kv.second == 0; });
		return out;
	}

	// right-normed [w0,[w1,[...,wk]]]
	Poly right_normed(const std::vector<int> &w) const
	{
		Poly p{{{w.back()}, 1}};
		int d = degrees[size_t(w.back())];
		for (size_t i = w.size() - 1; i-- > 0;)
		{
			p = commutator({{{w[i]}, 1}}, degrees[size_t(w[i])], p, d);
			d += degrees[size_t(w[i])];
		}
		return p;
	}

	// dim of the span of all right-normed brackets of the given length and degree
	int lie_dimension(int length, int degree) const
	{
		int k = int(degrees.size());
		std::vector<Poly> vecs;
		std::vector<int> w(size_t(length), 0);
		while (true)
		{
			if (this->degree(w) == degree)
				vecs.push_back(right_normed(w));
			int i = length - 1;
			while (i >= 0 && w[size_t(i)] == k - 1)
				w[size_t(i--)] = 0;
			if (i < 0)
				break;
			++w[size_t(i)];
		}
		return rank(vecs);
	}

	static int rank(const std::vector<Poly> &vecs)
	{
		std::map<std::vector<int>, int> col;
		for (auto &p : vecs)
			for (auto &[w, c] : p)
				col.emplace(w, 0);
		int n = 0;
		for (auto &[w, i] : col)
			i = n++;
		std::vector<std::vector<Rational>> m;
		for (auto &p : vecs)
		{
			std::vector<Rational> row(static_cast<size_t>(n));
			for (auto &[w, c] : p)
				row[size_t(col[w])] = c;
			m.push_back(std::move(row));
		}
		int r = 0;
		for (int c = 0; c < n && r < int(m.size()); ++c)
		{
			int p = r;
			while (p < int(m.size()) && m[size_t(p)][size_t(c)] == 0)
				++p;
			if (p == int(m.size()))
				continue;
			std::swap(m[size_t(p)], m[size_t(r)]);
			for (size_t i = size_t(r) + 1; i < m.size(); ++i)
			{
				if (m[i][size_t(c)] == 0)
					continue;
				Rational f = m[i][size_t(c)] / m[size_t(r)][size_t(c)];
				for (int k = c; k < n; ++k)
					m[i][size_t(k)] -= f * m[size_t(r)][size_t(k)];
			}
			++r;
		}
		return r;
	}
};

Poly as_poly(const LieElement &e)
{
	Poly p;
	for (auto &t : e.poly().terms())
		p[t.word.letters()] = t.coeff;
	return p;
}

ContextPtr make(std::vector<int> degrees, int n)
{
	std::vector<Generator> gens;
	const char *names[] = {"a", "b", "c", "d"};
	for (size_t i = 0; i < degrees.size(); ++i)
		gens.push_back({int(i), degrees[i], names[i]});
	return AlgebraContext::make(gens, n);
}

LieElement gen(const ContextPtr &ctx, const char *label) { return LieElement::generator(ctx, label); }

Rational koszul(int p, int q) { return (p * q) % 2 == 0 ? 1 : -1; }

} // namespace

TEST(Basis, OneOddGeneratorHasNoLengthThreeElement)
{
	auto ctx = make({-1}, 3);
	EXPECT_EQ(ctx->basis(-1, 1).size(), 1u);
	EXPECT_EQ(ctx->basis(-2, 2).size(), 1u);
	EXPECT_EQ(ctx->basis(-3, 3).size(), 0u);
	Oracle o{{-1}};
	EXPECT_EQ(o.lie_dimension(3, -3), 0);
	LieElement a = gen(ctx, "a");
	EXPECT_TRUE(bracket(a, bracket(a, a)).is_zero());
}

TEST(Basis, EmptyContext)
{
	auto ctx = AlgebraContext::make({}, 3);
	for (int len = 1; len <= 3; ++len)
		EXPECT_TRUE(ctx->monomials(len, [](int) { return true; }).empty());
	EXPECT_TRUE(parse_element(ctx, "0", -1).is_zero());
}

TEST(Basis, TwoEvenGeneratorsLengthTwo)
{
	auto ctx = make({0, 0}, 2);
	auto b = ctx->basis(0, 2);
	ASSERT_EQ(b.size(), 1u);
	EXPECT_EQ(LieElement::basis_element(ctx, b[0]).to_string(), "[a,b]");
}

TEST(Basis, WittCountsForTwoEvenGenerators)
{
	auto ctx = make({0, 0}, 6);
	auto witt = [](int n) {
		// (1/n) sum_{d | n} mu(d) 2^{n/d}
		auto mobius = [](int d) {
			int r = 1;
			for (int p = 2; p <= d; ++p)
				if (d % p == 0)
				{
					d /= p;
					if (d % p == 0)
						return 0;
					r = -r;
				}
			return r;
		};
		int s = 0;
		for (int d = 1; d <= n; ++d)
			if (n % d == 0)
				s += mobius(d) * (1 << (n / d));
		return s / n;
	};
	std::vector<size_t> expected{2, 1, 2, 3, 6, 9};
	for (int n = 1; n <= 6; ++n)
	{
		EXPECT_EQ(ctx->basis(0, n).size(), expected[size_t(n - 1)]) << n;
		EXPECT_EQ(int(expected[size_t(n - 1)]), witt(n));
	}
}

TEST(Basis, TwoOddGeneratorsLengthTwo)
{
	auto ctx = make({-1, -1}, 2);
	auto b = ctx->basis(-2, 2);
	ASSERT_EQ(b.size(), 3u);
	std::vector<std::string> text;
	for (auto &m : b)
		text.push_back(LieElement::basis_element(ctx, m).to_string());
	EXPECT_EQ(text, (std::vector<std::string>{"[a,a]", "[a,b]", "[b,b]"}));
}

TEST(Basis, LengthZeroIsEmpty)
{
	auto ctx = make({0, -1}, 3);
	EXPECT_TRUE(ctx->basis(0, 0).empty());
	EXPECT_TRUE(ctx->basis(-1, 0).empty());
}

TEST(Basis, DimensionsMatchBruteForcePrimitiveSpace)
{
	for (auto degrees : std::vector<std::vector<int>>{{-1}, {0, 0}, {-1, -1}, {-1, 0}, {-1, -1, 0}, {-1, 0, 1}})
	{
		auto ctx = make(degrees, 5);
		Oracle o{degrees};
		for (int len = 1; len <= 5; ++len)
		{
			std::map<int, size_t> counts;
			for (auto &m : ctx->monomials(len, [](int) { return true; }))
				++counts[ctx->word_degree(m.word)];
			for (int deg = -len; deg <= len; ++deg)
				EXPECT_EQ(int(counts[deg]), o.lie_dimension(len, deg))
				    << "generators " << degrees.size() << " length " << len << " degree " << deg;
		}
	}
}

TEST(Bracket, TensorImageIsTheGradedCommutator)
{
	auto ctx = make({-1, 0, -1}, 5);
	Oracle o{{-1, 0, -1}};
	std::mt19937_64 rng(5);
	for (int i = 0; i < 30; ++i)
	{
		int du = int(draw(rng, 2)) - 1, dv = int(draw(rng, 2)) - 1;
		LieElement u = random_element(ctx, du, 1, 2, rng, 3);
		LieElement v = random_element(ctx, dv, 1, 2, rng, 3);
		if (u.is_zero() || v.is_zero())
			continue;
		Poly expect = o.commutator(as_poly(u), du, as_poly(v), dv);
		std::erase_if(expect, [](auto &kv) { return kv.first.size() > 5; });
		EXPECT_EQ(as_poly(bracket(u, v)), expect);
	}
}

TEST(Bracket, OddSelfBracketIsBasisElement)
{
	auto ctx = make({-1}, 3);
	LieElement a = gen(ctx, "a");
	LieElement aa = bracket(a, a);
	EXPECT_FALSE(aa.is_zero());
	auto terms = aa.terms();
	ASSERT_EQ(terms.size(), 1u);
	EXPECT_TRUE(terms[0].first.square);
	EXPECT_EQ(terms[0].second, 1);
}

TEST(Bracket, EvenSelfBracketVanishes)
{
	auto ctx = make({0}, 3);
	LieElement x = gen(ctx, "a");
	EXPECT_TRUE(bracket(x, x).is_zero());
}

TEST(Bracket, OddPairIsSymmetric)
{
	auto ctx = make({-1, -1}, 3);
	LieElement a = gen(ctx, "a"), b = gen(ctx, "b");
	EXPECT_EQ(bracket(b, a), bracket(a, b));
}

TEST(Bracket, ContextMismatchThrows)
{
	auto c1 = make({0}, 3), c2 = make({0}, 3);
	EXPECT_THROW(bracket(gen(c1, "a"), gen(c2, "a")), std::invalid_argument);
}

TEST(Bracket, TruncationDropsLongWords)
{
	auto ctx = make({0, 0}, 2);
	LieElement x = gen(ctx, "a"), y = gen(ctx, "b");
	EXPECT_TRUE(bracket(x, bracket(x, y)).is_zero());
}

TEST(Bracket, AntisymmetryOnBasisPairs)
{
	auto ctx = make({-1, 0, -1}, 4);
	std::vector<LieMonomial> all;
	for (int len = 1; len <= 3; ++len)
		for (auto &m : ctx->monomials(len, [](int) { return true; }))
			all.push_back(m);
	for (auto &p : all)
		for (auto &q : all)
		{
			LieElement u = LieElement::basis_element(ctx, p), v = LieElement::basis_element(ctx, q);
			LieElement s = bracket(u, v);
			s.add_scaled(bracket(v, u), koszul(u.degree(), v.degree()));
			EXPECT_TRUE(s.is_zero());
		}
}

TEST(Bracket, JacobiOnGeneratorsAndRandomTriples)
{
	auto ctx = make({-1, 0, -1}, 5);
	auto jacobi = [](const LieElement &u, const LieElement &v, const LieElement &w) {
		LieElement r = bracket(u, bracket(v, w)) - bracket(bracket(u, v), w);
		r.add_scaled(bracket(v, bracket(u, w)), -koszul(u.degree(), v.degree()));
		return r.is_zero();
	};
	for (int i = 0; i < 3; ++i)
		for (int j = 0; j < 3; ++j)
			for (int k = 0; k < 3; ++k)
				EXPECT_TRUE(jacobi(LieElement::generator(ctx, i), LieElement::generator(ctx, j),
				                   LieElement::generator(ctx, k)));
	std::mt19937_64 rng(11);
	int checked = 0;
	while (checked < 100)
	{
		auto pick = [&] { return random_element(ctx, int(draw(rng, 2)) - 1, 1, 2, rng, 2); };
		LieElement u = pick(), v = pick(), w = pick();
		if (u.is_zero() || v.is_zero() || w.is_zero())
			continue;
		EXPECT_TRUE(jacobi(u, v, w));
		++checked;
	}
}

TEST(NormalForm, KoszulSignOnOddPair)
{
	auto ctx = make({-1, -1}, 3);
	EXPECT_EQ(parse_element(ctx, "[b,a]").to_string(), "[a,b]");
}

TEST(NormalForm, JacobiExpressionParsesToZero)
{
	auto ctx = make({-1, 0, -1}, 4);
	// x = a (odd), y = b (even), z = c (odd): (-1)^{|x||y|} = 1
	EXPECT_TRUE(parse_element(ctx, "[a,[b,c]] - [[a,b],c] - [b,[a,c]]").is_zero());
	EXPECT_TRUE(parse_element(make({-1}, 4), "[a,[a,a]]", -3).is_zero());
}

TEST(NormalForm, UnknownGeneratorThrows)
{
	auto ctx = make({0}, 3);
	EXPECT_THROW(parse_element(ctx, "[a,q]"), std::invalid_argument);
}

TEST(NormalForm, RenderParseRoundTripIsIdempotent)
{
	auto ctx = make({-1, 0, -1}, 5);
	std::mt19937_64 rng(3);
	for (int i = 0; i < 50; ++i)
	{
		LieElement e = random_element(ctx, int(draw(rng, 3)) - 2, 1, 5, rng, 5, 3);
		LieElement back = parse_element(ctx, e.to_string(), e.degree());
		EXPECT_EQ(back, e);
		EXPECT_EQ(parse_element(ctx, back.to_string(), e.degree()).to_string(), e.to_string());
	}
}

TEST(NormalForm, TextFormat)
{
	auto ctx = make({0, 0}, 3);
	EXPECT_EQ(parse_element(ctx, "1/2*[a,b] + a - 3*b + 0*a").to_string(), "a - 3*b + 1/2*[a,b]");
	EXPECT_EQ(parse_element(ctx, "2/4*a").to_string(), "1/2*a");
}

TEST(Filtration, Levels)
{
	auto ctx = make({-1, -1}, 4);
	EXPECT_EQ(gen(ctx, "a").filtration_level(), 1);
	EXPECT_EQ(parse_element(ctx, "[a,[a,b]]").filtration_level(), 3);
	EXPECT_EQ(LieElement::zero(ctx, -1).filtration_level(), 5);
}

TEST(Context, Errors)
{
	EXPECT_THROW(AlgebraContext::make({{0, 0, "a"}, {0, -1, "b"}}, 3), std::invalid_argument);
	EXPECT_THROW(AlgebraContext::make({{0, 0, "a"}}, 0), std::invalid_argument);
}

TEST(Rational, LowestTerms)
{
	Rational q(6, -4);
	q.canonicalize();
	EXPECT_EQ(to_string(q), "-3/2");
	EXPECT_EQ(parse_rational("-10/4"), Rational(-5, 2));
}
