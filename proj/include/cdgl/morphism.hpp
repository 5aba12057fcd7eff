#pragma once

#include "cdgl/lie_element.hpp"

#include <stdexcept>
#include <vector>

namespace cdgl {

/// Morphism of free graded Lie algebras given by degree-preserving images of
/// generators, applied modulo the target truncation.
class LieMorphism
{
	ContextPtr src_, dst_;
	std::vector<LieElement> images_;

  public:
	LieMorphism() = default;
	LieMorphism(ContextPtr src, ContextPtr dst, std::vector<LieElement> images)
	    : src_(std::move(src)), dst_(std::move(dst)), images_(std::move(images))
	{
		if (int(images_.size()) != src_->size())
			throw std::invalid_argument("morphism: one image per source generator required");
		for (int g = 0; g < src_->size(); ++g)
		{
			auto &im = images_[size_t(g)];
			if (im.context() != dst_)
				throw std::invalid_argument("morphism: image outside target context");
			if (!im.is_zero() && im.degree() != src_->degree(g))
				throw std::invalid_argument("morphism: image of " + src_->generator(g).label +
				                            " has wrong degree");
		}
	}

	const ContextPtr &source() const { return src_; }
	const ContextPtr &target() const { return dst_; }
	const LieElement &image(int g) const { return images_[size_t(g)]; }
	const std::vector<LieElement> &images() const { return images_; }

	LieElement operator()(const LieElement &u) const
	{
		if (u.context() != src_)
			throw std::invalid_argument("morphism applied outside its source context");
		int n = dst_->truncation();
		std::vector<Term> out;
		// prefix products are shared between consecutive (sorted) words
		std::vector<TensorPoly> prefix;
		Word prev;
		for (auto &t : u.poly().terms())
		{
			Word w = t.word;
			int common = 0;
			while (common < prev.length() && common < w.length() && prev[common] == w[common] &&
			       common < int(prefix.size()))
				++common;
			prefix.resize(size_t(common));
			for (int i = common; i < w.length(); ++i)
			{
				const TensorPoly &im = images_[size_t(w[i])].poly();
				if (i == 0)
					prefix.push_back(im);
				else
					prefix.push_back(multiply(prefix.back(), im, n));
			}
			prev = w;
			for (auto &s : prefix.back().terms())
				out.push_back({s.word, s.coeff * t.coeff});
		}
		return {dst_, u.degree(), TensorPoly::from_terms(std::move(out))};
	}

	/// Linear part as a matrix: entry (target letter, source letter).
	std::vector<std::vector<Rational>> linear_matrix() const
	{
		std::vector<std::vector<Rational>> m(size_t(dst_->size()),
		                                     std::vector<Rational>(size_t(src_->size())));
		for (int g = 0; g < src_->size(); ++g)
			for (auto &t : images_[size_t(g)].poly().terms())
				if (t.word.length() == 1)
					m[size_t(t.word[0])][size_t(g)] = t.coeff;
		return m;
	}
};

inline LieMorphism compose(const LieMorphism &g, const LieMorphism &f)
{
	if (f.target() != g.source())
		throw std::invalid_argument("compose: incompatible morphisms");
	std::vector<LieElement> images;
	for (auto &im : f.images())
		images.push_back(g(im));
	return {f.source(), g.target(), std::move(images)};
}

inline LieMorphism identity_morphism(const ContextPtr &ctx)
{
	std::vector<LieElement> images;
	for (int g = 0; g < ctx->size(); ++g)
		images.push_back(LieElement::generator(ctx, g));
	return {ctx, ctx, std::move(images)};
}

namespace detail {

// Dense Gauss-Jordan inverse over Q; nullopt when singular.
inline std::optional<std::vector<std::vector<Rational>>>
invert_matrix(std::vector<std::vector<Rational>> a)
{
	size_t n = a.size();
	for (auto &row : a)
		if (row.size() != n)
			return std::nullopt;
	std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
	for (size_t i = 0; i < n; ++i)
		inv[i][i] = 1;
	for (size_t c = 0; c < n; ++c)
	{
		size_t p = c;
		while (p < n && a[p][c] == 0)
			++p;
		if (p == n)
			return std::nullopt;
		std::swap(a[p], a[c]);
		std::swap(inv[p], inv[c]);
		Rational s = 1 / a[c][c];
		for (size_t k = 0; k < n; ++k)
		{
			a[c][k] *= s;
			inv[c][k] *= s;
		}
		for (size_t r = 0; r < n; ++r)
		{
			if (r == c || a[r][c] == 0)
				continue;
			Rational f = a[r][c];
			for (size_t k = 0; k < n; ++k)
			{
				a[r][k] -= f * a[c][k];
				inv[r][k] -= f * inv[c][k];
			}
		}
	}
	return inv;
}

} // namespace detail

/// Inverse of a morphism whose linear part is invertible, by fixed-point
/// iteration g <- g - h(f(g(y)) - y) with h the inverse linear part; each
/// round gains one bracket length.
inline LieMorphism invert(const LieMorphism &f)
{
	const auto &src = f.source();
	const auto &dst = f.target();
	if (src->size() != dst->size() || src->truncation() != dst->truncation())
		throw std::invalid_argument("invert: source and target must match in size and truncation");
	auto inv = detail::invert_matrix(f.linear_matrix());
	if (!inv)
		throw std::invalid_argument("invert: linear part is not invertible");
	std::vector<LieElement> lin;
	for (int y = 0; y < dst->size(); ++y)
	{
		LieElement e = LieElement::zero(src, dst->degree(y));
		for (int x = 0; x < src->size(); ++x)
			if ((*inv)[size_t(x)][size_t(y)] != 0)
				e.add_scaled(LieElement::generator(src, x), (*inv)[size_t(x)][size_t(y)]);
		lin.push_back(std::move(e));
	}
	LieMorphism h(dst, src, lin);
	LieMorphism g = h;
	for (int round = 1; round < dst->truncation(); ++round)
	{
		std::vector<LieElement> next;
		bool changed = false;
		for (int y = 0; y < dst->size(); ++y)
		{
			LieElement err = f(g.image(y)) - LieElement::generator(dst, y);
			if (!err.is_zero())
				changed = true;
			next.push_back(g.image(y) - h(err));
		}
		if (!changed)
			break;
		g = LieMorphism(dst, src, std::move(next));
	}
	return g;
}

} // namespace cdgl
