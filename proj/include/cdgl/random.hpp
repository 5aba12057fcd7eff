#pragma once

#include "cdgl/lie_element.hpp"

#include <random>

namespace cdgl {

// Bounded draws by modulo on the raw engine output: std distributions are
// not reproducible across standard libraries.
inline uint64_t draw(std::mt19937_64 &rng, uint64_t n) { return rng() % n; }

/// Sum of `terms` random basis monomials of the given degree with bracket
/// length in [min_len, max_len], nonzero integer coefficients in [-range, range].
/// Zero when no monomial qualifies.
inline LieElement random_element(const ContextPtr &ctx, int degree, int min_len, int max_len,
                                 std::mt19937_64 &rng, int terms = 4, int range = 2)
{
	std::vector<LieMonomial> pool;
	for (int len = std::max(1, min_len); len <= std::min(max_len, ctx->truncation()); ++len)
		for (auto &m : ctx->basis(degree, len))
			pool.push_back(m);
	LieElement e = LieElement::zero(ctx, degree);
	if (pool.empty())
		return e;
	for (int i = 0; i < terms; ++i)
	{
		const auto &m = pool[size_t(draw(rng, pool.size()))];
		int c = int(draw(rng, uint64_t(2 * range))) - range;
		if (c >= 0)
			++c;
		e.add_scaled(LieElement::basis_element(ctx, m), Rational(c));
	}
	return e;
}

} // namespace cdgl
