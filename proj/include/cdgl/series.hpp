#pragma once

#include "cdgl/lie_element.hpp"

#include <functional>
#include <mutex>

namespace cdgl {

/// Bernoulli numbers with B_1 = -1/2, i.e. t/(e^t - 1) = sum B_n t^n / n!.
/// Append-only table behind a mutex.
inline Rational bernoulli(int n)
{
	if (n < 0)
		throw std::invalid_argument("bernoulli: negative index");
	static std::mutex mutex;
	static std::vector<Rational> table{Rational(1)};
	std::lock_guard lock(mutex);
	while (int(table.size()) <= n)
	{
		// sum_{k=0}^{m} C(m+1,k) B_k = 0
		int m = int(table.size());
		Rational s = 0;
		Integer binom = 1; // C(m+1, 0)
		for (int k = 0; k < m; ++k)
		{
			s += Rational(binom) * table[size_t(k)];
			binom = binom * (m + 1 - k) / (k + 1);
		}
		table.push_back(-s / Rational(m + 1));
	}
	return table[size_t(n)];
}

/// ad_x(target) = [x, target].
inline LieElement ad(const LieElement &x, const LieElement &target) { return bracket(x, target); }

enum class AdSeries
{
	exp,            // e^{ad}
	exp_minus_one,  // (e^{ad} - 1)/ad
	bernoulli_gen,  // ad/(e^{ad} - 1)
};

inline Rational ad_series_coefficient(AdSeries kind, int n)
{
	switch (kind)
	{
	case AdSeries::exp:
		return Rational(1, factorial(n));
	case AdSeries::exp_minus_one:
		return Rational(1, factorial(n + 1));
	case AdSeries::bernoulli_gen:
		return bernoulli(n) / Rational(factorial(n));
	}
	return 0;
}

inline void require_degree_zero(const LieElement &x, const char *what)
{
	if (!x.is_zero() && x.degree() != 0)
		throw std::invalid_argument(std::string(what) + ": gauge element must have degree 0");
}

/// sum_n c_n ad_x^n(target); terminates once ad_x^n(target) leaves L/L^[N+1].
inline LieElement ad_series(AdSeries kind, const LieElement &x, const LieElement &target)
{
	require_degree_zero(x, "ad_series");
	x.require_same_context(target);
	LieElement result = target * ad_series_coefficient(kind, 0);
	LieElement power = target;
	for (int n = 1; !x.is_zero(); ++n)
	{
		power = ad(x, power);
		if (power.is_zero())
			break;
		result.add_scaled(power, ad_series_coefficient(kind, n));
	}
	return result;
}

inline LieElement exp_ad(const LieElement &x, const LieElement &target)
{
	return ad_series(AdSeries::exp, x, target);
}

namespace detail {

// e^X - 1 in the truncated tensor algebra
inline TensorPoly exp_minus_one(const TensorPoly &x, int max_len)
{
	TensorPoly result, power = x;
	for (int k = 1; !power.is_zero(); ++k)
	{
		result.add_scaled(power, Rational(1, factorial(k)));
		power = multiply(power, x, max_len);
	}
	return result;
}

// log(1 + Z)
inline TensorPoly log_one_plus(const TensorPoly &z, int max_len)
{
	TensorPoly result, power = z;
	for (int k = 1; !power.is_zero(); ++k)
	{
		result.add_scaled(power, Rational(k % 2 == 1 ? 1 : -1, k));
		power = multiply(power, z, max_len);
	}
	return result;
}

} // namespace detail

/// Baker-Campbell-Hausdorff product log(e^x e^y), computed in the truncated
/// tensor algebra and projected back with the Dynkin map.
inline LieElement bch(const LieElement &x, const LieElement &y)
{
	x.require_same_context(y);
	require_degree_zero(x, "bch");
	require_degree_zero(y, "bch");
	if (x.is_zero())
		return y;
	if (y.is_zero())
		return x;
	const auto &ctx = x.context();
	int n = ctx->truncation();
	TensorPoly ex = detail::exp_minus_one(x.poly(), n);
	TensorPoly ey = detail::exp_minus_one(y.poly(), n);
	TensorPoly z = ex + ey + multiply(ex, ey, n);
	return lie_projection(ctx, 0, detail::log_one_plus(z, n));
}

/// Inverse in the group (L_0, bch).
inline LieElement bch_inverse(const LieElement &x) { return -x; }

/// Left fold of bch. Stops once every remaining factor lies in L^[N+1].
inline LieElement bch_product(const std::vector<LieElement> &factors)
{
	if (factors.empty())
		throw std::invalid_argument("bch_product: empty list");
	LieElement acc = factors.front();
	for (size_t i = 1; i < factors.size(); ++i)
		acc = bch(acc, factors[i]);
	return acc;
}

using Derivation = std::function<LieElement(const LieElement &)>;

/// Gauge action x.z = e^{ad_x}(z) - (e^{ad_x} - 1)/ad_x (dx).
template <class D> LieElement gauge(const LieElement &x, const LieElement &z, const D &d)
{
	require_degree_zero(x, "gauge");
	x.require_same_context(z);
	if (!z.is_zero() && z.degree() != -1)
		throw std::invalid_argument("gauge: target must have degree -1");
	if (x.is_zero())
		return z;
	LieElement r = exp_ad(x, z);
	r -= ad_series(AdSeries::exp_minus_one, x, d(x));
	return r;
}

} // namespace cdgl
