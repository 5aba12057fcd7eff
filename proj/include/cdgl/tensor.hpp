#pragma once

#include "cdgl/rational.hpp"
#include "cdgl/word.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace cdgl {

struct Term
{
	Word word;
	Rational coeff;
};

/// Sparse noncommutative polynomial without constant term: a finite sum of
/// words with rational coefficients, kept sorted by word with no zero entries.
class TensorPoly
{
	std::vector<Term> terms_;

  public:
	TensorPoly() = default;

	static TensorPoly monomial(Word w, Rational c = 1)
	{
		TensorPoly p;
		if (c != 0)
			p.terms_.push_back({w, std::move(c)});
		return p;
	}

	/// Normalizes an arbitrary list of terms (duplicates summed, zeros dropped).
	static TensorPoly from_terms(std::vector<Term> terms)
	{
		std::sort(terms.begin(), terms.end(),
		          [](const Term &x, const Term &y) { return x.word < y.word; });
		TensorPoly p;
		p.terms_.reserve(terms.size());
		for (auto &t : terms)
		{
			if (!p.terms_.empty() && p.terms_.back().word == t.word)
				p.terms_.back().coeff += t.coeff;
			else
			{
				if (!p.terms_.empty() && p.terms_.back().coeff == 0)
					p.terms_.pop_back();
				p.terms_.push_back(std::move(t));
			}
		}
		if (!p.terms_.empty() && p.terms_.back().coeff == 0)
			p.terms_.pop_back();
		return p;
	}

	const std::vector<Term> &terms() const { return terms_; }
	size_t size() const { return terms_.size(); }
	bool is_zero() const { return terms_.empty(); }

	Rational coefficient(Word w) const
	{
		auto it = std::lower_bound(
		    terms_.begin(), terms_.end(), w,
		    [](const Term &t, Word x) { return t.word < x; });
		if (it != terms_.end() && it->word == w)
			return it->coeff;
		return 0;
	}

	int min_length() const
	{
		int m = max_word_length + 1;
		for (auto &t : terms_)
			m = std::min(m, t.word.length());
		return m;
	}

	int max_length() const
	{
		int m = 0;
		for (auto &t : terms_)
			m = std::max(m, t.word.length());
		return m;
	}

	template <class Pred> TensorPoly filter(Pred keep) const
	{
		TensorPoly p;
		for (auto &t : terms_)
			if (keep(t.word))
				p.terms_.push_back(t);
		return p;
	}

	TensorPoly truncated(int max_len) const
	{
		return filter([max_len](Word w) { return w.length() <= max_len; });
	}

	TensorPoly length_part(int len) const
	{
		return filter([len](Word w) { return w.length() == len; });
	}

	TensorPoly &operator*=(const Rational &c)
	{
		if (c == 0)
			terms_.clear();
		else
			for (auto &t : terms_)
				t.coeff *= c;
		return *this;
	}

	TensorPoly operator-() const
	{
		TensorPoly p = *this;
		for (auto &t : p.terms_)
			t.coeff = -t.coeff;
		return p;
	}

	/// this += c * other, by a linear merge.
	TensorPoly &add_scaled(const TensorPoly &other, const Rational &c)
	{
		if (c == 0 || other.terms_.empty())
			return *this;
		std::vector<Term> out;
		out.reserve(terms_.size() + other.terms_.size());
		size_t i = 0, j = 0;
		while (i < terms_.size() || j < other.terms_.size())
		{
			if (j == other.terms_.size() ||
			    (i < terms_.size() && terms_[i].word < other.terms_[j].word))
				out.push_back(std::move(terms_[i++]));
			else if (i == terms_.size() || other.terms_[j].word < terms_[i].word)
			{
				out.push_back({other.terms_[j].word, other.terms_[j].coeff * c});
				++j;
			}
			else
			{
				Rational v = terms_[i].coeff + other.terms_[j].coeff * c;
				if (v != 0)
					out.push_back({terms_[i].word, std::move(v)});
				++i;
				++j;
			}
		}
		terms_ = std::move(out);
		return *this;
	}

	TensorPoly &operator+=(const TensorPoly &o) { return add_scaled(o, 1); }
	TensorPoly &operator-=(const TensorPoly &o) { return add_scaled(o, -1); }

	friend TensorPoly operator+(TensorPoly a, const TensorPoly &b) { return a += b; }
	friend TensorPoly operator-(TensorPoly a, const TensorPoly &b) { return a -= b; }
	friend TensorPoly operator*(TensorPoly a, const Rational &c) { return a *= c; }
	friend TensorPoly operator*(const Rational &c, TensorPoly a) { return a *= c; }

	friend bool operator==(const TensorPoly &a, const TensorPoly &b)
	{
		if (a.terms_.size() != b.terms_.size())
			return false;
		for (size_t i = 0; i < a.terms_.size(); ++i)
			if (a.terms_[i].word != b.terms_[i].word ||
			    a.terms_[i].coeff != b.terms_[i].coeff)
				return false;
		return true;
	}
};

/// Concatenation product, dropping words longer than max_len.
inline TensorPoly multiply(const TensorPoly &a, const TensorPoly &b, int max_len)
{
	std::vector<Term> out;
	for (auto &x : a.terms())
	{
		int room = max_len - x.word.length();
		if (room < 0)
			continue;
		for (auto &y : b.terms())
			if (y.word.length() <= room)
				out.push_back({x.word * y.word, x.coeff * y.coeff});
	}
	return TensorPoly::from_terms(std::move(out));
}

} // namespace cdgl
