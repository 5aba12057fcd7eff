#pragma once

#include "cdgl/context.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cdgl {

/// Raised when a tensor polynomial that should be a Lie element is not.
struct NotLieError : std::runtime_error
{
	using std::runtime_error::runtime_error;
};

/// Homogeneous element of the truncated free graded Lie algebra L/L^[N+1].
///
/// Stored through its faithful image in the tensor algebra, where the bracket
/// is the graded commutator; coordinates in the super-Lyndon basis are
/// recovered on demand by triangular elimination on leading words.
class LieElement
{
	ContextPtr ctx_;
	int degree_ = 0;
	TensorPoly poly_;

  public:
	LieElement() = default;
	LieElement(ContextPtr ctx, int degree, TensorPoly poly)
	    : ctx_(std::move(ctx)), degree_(degree), poly_(std::move(poly))
	{
		poly_ = poly_.truncated(ctx_->truncation());
	}

	static LieElement zero(ContextPtr ctx, int degree) { return {std::move(ctx), degree, {}}; }

	static LieElement generator(ContextPtr ctx, int letter)
	{
		int d = ctx->degree(letter);
		return {std::move(ctx), d, TensorPoly::monomial(Word::letter(letter))};
	}

	static LieElement generator(const ContextPtr &ctx, const std::string &label)
	{
		return generator(ctx, ctx->letter_of(label));
	}

	static LieElement basis_element(ContextPtr ctx, const LieMonomial &m)
	{
		int d = ctx->word_degree(m.word);
		TensorPoly p = ctx->expansion(m);
		return {std::move(ctx), d, std::move(p)};
	}

	const ContextPtr &context() const { return ctx_; }
	int degree() const { return degree_; }
	const TensorPoly &poly() const { return poly_; }
	bool is_zero() const { return poly_.is_zero(); }
	int truncation() const { return ctx_->truncation(); }

	/// Minimal bracket length among nonzero terms; N+1 for zero.
	int filtration_level() const
	{
		return is_zero() ? ctx_->truncation() + 1 : poly_.min_length();
	}

	LieElement length_part(int len) const { return {ctx_, degree_, poly_.length_part(len)}; }

	template <class Pred> LieElement filter_words(Pred keep) const
	{
		return {ctx_, degree_, poly_.filter(keep)};
	}

	void require_same_context(const LieElement &o) const
	{
		if (ctx_ != o.ctx_)
			throw std::invalid_argument("elements belong to different algebra contexts");
	}

	LieElement &operator+=(const LieElement &o)
	{
		require_same_context(o);
		combine_degree(o);
		poly_ += o.poly_;
		return *this;
	}

	LieElement &operator-=(const LieElement &o)
	{
		require_same_context(o);
		combine_degree(o);
		poly_ -= o.poly_;
		return *this;
	}

	LieElement &add_scaled(const LieElement &o, const Rational &c)
	{
		require_same_context(o);
		combine_degree(o);
		poly_.add_scaled(o.poly_, c);
		return *this;
	}

	LieElement &operator*=(const Rational &c)
	{
		poly_ *= c;
		return *this;
	}

	friend LieElement operator+(LieElement a, const LieElement &b) { return a += b; }
	friend LieElement operator-(LieElement a, const LieElement &b) { return a -= b; }
	friend LieElement operator*(const Rational &c, LieElement a) { return a *= c; }
	friend LieElement operator*(LieElement a, const Rational &c) { return a *= c; }
	LieElement operator-() const { return {ctx_, degree_, -poly_}; }

	friend bool operator==(const LieElement &a, const LieElement &b)
	{
		a.require_same_context(b);
		if (a.is_zero() || b.is_zero())
			return a.is_zero() && b.is_zero();
		return a.degree_ == b.degree_ && a.poly_ == b.poly_;
	}

	/// Coordinates in the super-Lyndon basis, ordered by (length, word).
	std::vector<std::pair<LieMonomial, Rational>> terms() const
	{
		std::vector<std::pair<LieMonomial, Rational>> out;
		std::map<Word, Rational> rest;
		for (auto &t : poly_.terms())
			rest.emplace_hint(rest.end(), t.word, t.coeff);
		while (!rest.empty())
		{
			auto lead = rest.begin();
			auto m = ctx_->monomial_for(lead->first);
			if (!m)
				throw NotLieError("not a Lie element (leading word is not super-Lyndon)");
			Rational c = lead->second;
			if (m->square)
				c /= 2;
			for (auto &t : ctx_->expansion(*m).terms())
			{
				auto [it, fresh] = rest.try_emplace(t.word, 0);
				it->second -= c * t.coeff;
				if (it->second == 0)
					rest.erase(it);
			}
			out.emplace_back(*m, c);
		}
		std::stable_sort(out.begin(), out.end(), [](auto &x, auto &y) {
			if (x.first.length() != y.first.length())
				return x.first.length() < y.first.length();
			return x.first.word < y.first.word;
		});
		return out;
	}

	std::string to_string() const;

  private:
	void combine_degree(const LieElement &o)
	{
		if (is_zero())
			degree_ = o.degree_;
		else if (!o.is_zero() && o.degree_ != degree_)
			throw std::invalid_argument("adding elements of different degrees (" +
			                            std::to_string(degree_) + " and " +
			                            std::to_string(o.degree_) + ")");
	}
};

inline LieElement bracket(const LieElement &u, const LieElement &v)
{
	u.require_same_context(v);
	const auto &ctx = u.context();
	return {ctx, u.degree() + v.degree(),
	        AlgebraContext::commutator(u.poly(), u.degree(), v.poly(), v.degree(),
	                                   ctx->truncation())};
}

/// Left-normed bracketing of every word: w1...wk -> [..[w1,w2],..,wk].
/// On Lie elements of length k this is multiplication by k.
inline TensorPoly dynkin_map(const AlgebraContext &ctx, const TensorPoly &p)
{
	std::vector<Term> out;
	std::vector<std::pair<Word, bool>> cur, next;
	for (auto &t : p.terms())
	{
		Word w = t.word;
		int k = w.length();
		cur.assign(1, {w.prefix(1), false});
		int prefix_degree = ctx.degree(w[0]);
		for (int j = 1; j < k; ++j)
		{
			Word letter = Word::letter(w[j]);
			int dl = ctx.degree(w[j]);
			bool swap_sign = (prefix_degree * dl) % 2 == 0;
			next.clear();
			for (auto &[x, neg] : cur)
			{
				next.push_back({x * letter, neg});
				next.push_back({letter * x, swap_sign ? !neg : neg});
			}
			std::swap(cur, next);
			prefix_degree += dl;
		}
		for (auto &[x, neg] : cur)
			out.push_back({x, neg ? Rational(-t.coeff) : t.coeff});
	}
	return TensorPoly::from_terms(std::move(out));
}

/// Dynkin-Specht-Wever projection onto Lie elements, length by length.
inline LieElement lie_projection(const ContextPtr &ctx, int degree, const TensorPoly &p)
{
	TensorPoly d = dynkin_map(*ctx, p);
	std::vector<Term> out;
	for (auto &t : d.terms())
		out.push_back({t.word, t.coeff / t.word.length()});
	return {ctx, degree, TensorPoly::from_terms(std::move(out))};
}

inline std::string render_monomial(const AlgebraContext &ctx, const LieMonomial &m)
{
	auto render_lyndon = [&](auto &self, Word w) -> std::string {
		if (w.length() == 1)
			return ctx.generator(w[0]).label;
		auto [u, v] = standard_factorization(w);
		return "[" + self(self, u) + "," + self(self, v) + "]";
	};
	if (m.square)
	{
		std::string h = render_lyndon(render_lyndon, m.root());
		return "[" + h + "," + h + "]";
	}
	return render_lyndon(render_lyndon, m.word);
}

/// Element text format: `c*[g1,[g2,g3]]` terms joined by ` + ` / ` - `, with
/// coefficients `p/q` (`p` when q = 1, omitted when 1).
inline std::string LieElement::to_string() const
{
	auto ts = terms();
	if (ts.empty())
		return "0";
	std::string out;
	bool first = true;
	for (auto &[m, c] : ts)
	{
		Rational mag = abs(c);
		bool neg = c < 0;
		if (first)
			out += neg ? "-" : "";
		else
			out += neg ? " - " : " + ";
		if (mag != 1)
			out += cdgl::to_string(mag) + "*";
		out += render_monomial(*ctx_, m);
		first = false;
	}
	return out;
}

struct ParseError : std::invalid_argument
{
	using std::invalid_argument::invalid_argument;
};

namespace detail {

class ElementParser
{
	const ContextPtr &ctx_;
	std::string_view s_;
	size_t pos_ = 0;

	void skip_ws()
	{
		while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
			++pos_;
	}

	bool peek(char c)
	{
		skip_ws();
		return pos_ < s_.size() && s_[pos_] == c;
	}

	void expect(char c)
	{
		if (!peek(c))
			fail(std::string("expected '") + c + "'");
		++pos_;
	}

	[[noreturn]] void fail(const std::string &msg)
	{
		throw ParseError("parse error at offset " + std::to_string(pos_) + ": " + msg);
	}

	// A term is either an optional coefficient times an atom, or a bare number
	// (only 0 is meaningful). std::nullopt element means "zero of unknown degree".
	std::optional<LieElement> term()
	{
		skip_ws();
		std::optional<Rational> coeff;
		if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
		{
			size_t start = pos_;
			while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
				++pos_;
			if (pos_ < s_.size() && s_[pos_] == '/')
			{
				++pos_;
				size_t ds = pos_;
				while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
					++pos_;
				if (ds == pos_)
					fail("malformed rational");
			}
			coeff = parse_rational(s_.substr(start, pos_ - start));
			if (!peek('*'))
			{
				if (*coeff != 0)
					fail("a nonzero constant is not a Lie element");
				return std::nullopt;
			}
			++pos_;
		}
		std::optional<LieElement> a = atom();
		if (coeff && a)
			*a *= *coeff;
		return a;
	}

	std::optional<LieElement> atom()
	{
		skip_ws();
		if (pos_ >= s_.size())
			fail("unexpected end of input");
		char c = s_[pos_];
		if (c == '[')
		{
			++pos_;
			auto x = expr();
			expect(',');
			auto y = expr();
			expect(']');
			if (!x || !y)
				return std::nullopt;
			return bracket(*x, *y);
		}
		if (c == '(')
		{
			++pos_;
			auto x = expr();
			expect(')');
			return x;
		}
		if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
		{
			size_t start = pos_;
			while (pos_ < s_.size() &&
			       (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
				++pos_;
			std::string name(s_.substr(start, pos_ - start));
			auto letter = ctx_->find(name);
			if (!letter)
				throw ParseError("unknown generator: " + name);
			return LieElement::generator(ctx_, *letter);
		}
		fail(std::string("unexpected character '") + c + "'");
	}

  public:
	ElementParser(const ContextPtr &ctx, std::string_view s) : ctx_(ctx), s_(s) {}

	std::optional<LieElement> expr()
	{
		std::optional<LieElement> acc;
		bool negate = false;
		if (peek('-'))
		{
			negate = true;
			++pos_;
		}
		else if (peek('+'))
			++pos_;
		auto add = [&](std::optional<LieElement> t, bool neg) {
			if (!t)
				return;
			if (neg)
				*t *= Rational(-1);
			if (!acc)
				acc = std::move(t);
			else
			{
				try
				{
					*acc += *t;
				}
				catch (const std::invalid_argument &e)
				{
					throw ParseError(e.what());
				}
			}
		};
		add(term(), negate);
		while (true)
		{
			if (peek('+'))
			{
				++pos_;
				bool neg = false;
				if (peek('-'))
				{
					++pos_;
					neg = true;
				}
				add(term(), neg);
			}
			else if (peek('-'))
			{
				++pos_;
				add(term(), true);
			}
			else
				break;
		}
		return acc;
	}

	bool at_end()
	{
		skip_ws();
		return pos_ == s_.size();
	}
};

} // namespace detail

/// Parses the element text format into canonical form. A bare `0` needs
/// `zero_degree` to fix its degree.
inline LieElement parse_element(const ContextPtr &ctx, std::string_view text,
                                std::optional<int> zero_degree = std::nullopt)
{
	detail::ElementParser p(ctx, text);
	auto e = p.expr();
	if (!p.at_end())
		throw ParseError("trailing input in element: " + std::string(text));
	if (!e || e->is_zero())
	{
		int d = zero_degree ? *zero_degree : (e ? e->degree() : 0);
		return LieElement::zero(ctx, d);
	}
	if (zero_degree && e->degree() != *zero_degree)
		throw ParseError("element has degree " + std::to_string(e->degree()) + ", expected " +
		                 std::to_string(*zero_degree));
	return *e;
}

} // namespace cdgl
