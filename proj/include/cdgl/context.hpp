#pragma once

#include "cdgl/tensor.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace cdgl {

struct Generator
{
	int id = 0;
	int degree = 0;
	std::string label;
};

/// Canonical basis element of the free graded Lie algebra: the standard
/// bracketing of a Lyndon word, or the self-bracket [w,w] of an odd Lyndon w.
/// `word` is the leading word (w, resp. ww).
struct LieMonomial
{
	Word word;
	bool square = false;

	Word root() const { return square ? word.prefix(word.length() / 2) : word; }
	int length() const { return word.length(); }
	friend bool operator==(const LieMonomial &, const LieMonomial &) = default;
};

class AlgebraContext;
using ContextPtr = std::shared_ptr<const AlgebraContext>;

/// Fixes the generator alphabet (ordered by id) and the truncation order N.
/// Elements live in L / L^[N+1].
class AlgebraContext
{
	std::vector<Generator> gens_;
	int truncation_;
	std::unordered_map<std::string, int> by_label_;

	mutable std::mutex cache_mutex_;
	mutable std::unordered_map<Word, TensorPoly> expansion_cache_;

	AlgebraContext(std::vector<Generator> gens, int n) : gens_(std::move(gens)), truncation_(n) {}

  public:
	static ContextPtr make(std::vector<Generator> gens, int truncation)
	{
		if (truncation < 1)
			throw std::invalid_argument("truncation order must be >= 1");
		if (truncation > max_word_length)
			throw std::invalid_argument("truncation order exceeds " +
			                            std::to_string(max_word_length));
		if (gens.size() > size_t(max_alphabet))
			throw std::invalid_argument("too many generators");
		std::sort(gens.begin(), gens.end(),
		          [](const Generator &a, const Generator &b) { return a.id < b.id; });
		for (size_t i = 1; i < gens.size(); ++i)
			if (gens[i].id == gens[i - 1].id)
				throw std::invalid_argument("duplicate generator id " +
				                            std::to_string(gens[i].id));
		auto ctx = std::shared_ptr<AlgebraContext>(new AlgebraContext(std::move(gens), truncation));
		for (size_t i = 0; i < ctx->gens_.size(); ++i)
		{
			auto &label = ctx->gens_[i].label;
			if (label.empty())
				label = "g" + std::to_string(ctx->gens_[i].id);
			if (!ctx->by_label_.emplace(label, int(i)).second)
				throw std::invalid_argument("duplicate generator label " + label);
		}
		return ctx;
	}

	/// Same generators, different truncation.
	ContextPtr with_truncation(int truncation) const { return make(gens_, truncation); }

	int truncation() const { return truncation_; }
	int size() const { return int(gens_.size()); }
	const std::vector<Generator> &generators() const { return gens_; }
	const Generator &generator(int letter) const { return gens_.at(size_t(letter)); }
	int degree(int letter) const { return gens_[size_t(letter)].degree; }

	std::optional<int> find(const std::string &label) const
	{
		auto it = by_label_.find(label);
		if (it == by_label_.end())
			return std::nullopt;
		return it->second;
	}

	int letter_of(const std::string &label) const
	{
		auto l = find(label);
		if (!l)
			throw std::invalid_argument("unknown generator: " + label);
		return *l;
	}

	int word_degree(Word w) const
	{
		int d = 0;
		for (int i = 0; i < w.length(); ++i)
			d += degree(w[i]);
		return d;
	}

	/// Recognizes leading words of basis elements.
	std::optional<LieMonomial> monomial_for(Word w) const
	{
		if (is_lyndon(w))
			return LieMonomial{w, false};
		int n = w.length();
		if (n % 2 == 0)
		{
			Word h = w.prefix(n / 2);
			if (h == w.suffix(n / 2) && is_lyndon(h) && (word_degree(h) % 2 != 0))
				return LieMonomial{w, true};
		}
		return std::nullopt;
	}

	/// Image of a basis element in the tensor algebra (leading coefficient 1,
	/// or 2 for odd squares).
	const TensorPoly &expansion(const LieMonomial &m) const
	{
		// keyed by leading word; ww is never Lyndon so squares cannot collide
		Word key = m.word;
		{
			std::lock_guard lock(cache_mutex_);
			auto it = expansion_cache_.find(key);
			if (it != expansion_cache_.end())
				return it->second;
		}
		TensorPoly p;
		if (m.square)
		{
			const TensorPoly &h = expansion(LieMonomial{m.root(), false});
			p = multiply(h, h, max_word_length) * Rational(2);
		}
		else if (m.word.length() == 1)
			p = TensorPoly::monomial(m.word);
		else
		{
			auto [u, v] = standard_factorization(m.word);
			p = commutator(expansion(LieMonomial{u, false}), word_degree(u),
			               expansion(LieMonomial{v, false}), word_degree(v), max_word_length);
		}
		std::lock_guard lock(cache_mutex_);
		return expansion_cache_.emplace(key, std::move(p)).first->second;
	}

	/// Graded commutator of homogeneous tensor polynomials.
	static TensorPoly commutator(const TensorPoly &a, int deg_a, const TensorPoly &b, int deg_b,
	                             int max_len)
	{
		TensorPoly r = multiply(a, b, max_len);
		Rational sign = (deg_a * deg_b) % 2 == 0 ? -1 : 1;
		r.add_scaled(multiply(b, a, max_len), sign);
		return r;
	}

	/// All super-Lyndon leading words of the given length over the letters
	/// accepted by `allow`, in lexicographic order.
	template <class Allow> std::vector<LieMonomial> monomials(int length, Allow allow) const
	{
		std::vector<LieMonomial> out;
		if (length < 1)
			return out;
		std::vector<int> alphabet;
		for (int l = 0; l < size(); ++l)
			if (allow(l))
				alphabet.push_back(l);
		int k = int(alphabet.size());
		if (k == 0)
			return out;
		// Duval's generation of Lyndon words of length <= length
		std::vector<int> w{-1};
		std::vector<int> letters;
		std::vector<Word> lyndon_half;
		while (!w.empty())
		{
			w.back() += 1;
			int n = int(w.size());
			if (n == length || 2 * n == length)
			{
				letters.resize(w.size());
				for (size_t i = 0; i < w.size(); ++i)
					letters[i] = alphabet[size_t(w[i])];
				Word word = Word::from_letters(letters);
				if (n == length)
					out.push_back({word, false});
				else if (word_degree(word) % 2 != 0)
					out.push_back({word * word, true});
			}
			int m = n;
			while (int(w.size()) < length)
				w.push_back(w[w.size() - size_t(m)]);
			while (!w.empty() && w.back() == k - 1)
				w.pop_back();
		}
		std::sort(out.begin(), out.end(),
		          [](const LieMonomial &a, const LieMonomial &b) { return a.word < b.word; });
		return out;
	}

	/// Basis of the (degree, length) block in deterministic lexicographic order.
	std::vector<LieMonomial> basis(int degree, int length) const
	{
		auto all = monomials(length, [](int) { return true; });
		std::erase_if(all, [&](const LieMonomial &m) { return word_degree(m.word) != degree; });
		return all;
	}
};

} // namespace cdgl
