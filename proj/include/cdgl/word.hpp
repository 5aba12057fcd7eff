#pragma once

#include <cassert>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace cdgl {

inline constexpr int max_word_length = 10;
inline constexpr int max_alphabet = 63;

/// A word over the generator alphabet, packed into one 64-bit integer.
///
/// Letters are stored most-significant first in 6-bit slots (letter index + 1,
/// so an empty slot is 0) and the length sits in the low 4 bits. With this
/// layout integer comparison is lexicographic comparison with a proper prefix
/// ordered before its extensions.
class Word
{
	uint64_t code_ = 0;

	static constexpr int slot_shift(int i) { return 58 - 6 * i; }
	explicit constexpr Word(uint64_t code) : code_(code) {}

  public:
	constexpr Word() = default;

	static constexpr Word letter(int idx)
	{
		assert(idx >= 0 && idx < max_alphabet);
		return Word((uint64_t(idx + 1) << slot_shift(0)) | 1);
	}

	static Word from_letters(std::span<const int> letters)
	{
		if (letters.size() > size_t(max_word_length))
			throw std::length_error("word longer than max_word_length");
		uint64_t code = 0;
		for (size_t i = 0; i < letters.size(); ++i)
			code |= uint64_t(letters[i] + 1) << slot_shift(int(i));
		return Word(code | letters.size());
	}

	static constexpr Word from_code(uint64_t code) { return Word(code); }

	constexpr uint64_t code() const { return code_; }
	constexpr int length() const { return int(code_ & 0xF); }
	constexpr bool empty() const { return code_ == 0; }

	constexpr int operator[](int i) const
	{
		return int((code_ >> slot_shift(i)) & 0x3F) - 1;
	}

	/// Concatenation; the caller guarantees the combined length fits.
	constexpr Word operator*(Word o) const
	{
		int n = length();
		assert(n + o.length() <= max_word_length);
		uint64_t letters = (code_ & ~uint64_t(0xF)) |
		                   ((o.code_ & ~uint64_t(0xF)) >> (6 * n));
		return Word(letters | uint64_t(n + o.length()));
	}

	constexpr Word prefix(int n) const
	{
		if (n <= 0)
			return Word();
		uint64_t mask = ~uint64_t(0) << (64 - 6 * n);
		return Word((code_ & mask) | uint64_t(n));
	}

	constexpr Word suffix(int from) const
	{
		int n = length() - from;
		if (n <= 0)
			return Word();
		uint64_t letters = (code_ & ~uint64_t(0xF)) << (6 * from);
		return Word(letters | uint64_t(n));
	}

	std::vector<int> letters() const
	{
		std::vector<int> r(static_cast<size_t>(length()));
		for (int i = 0; i < length(); ++i)
			r[size_t(i)] = (*this)[i];
		return r;
	}

	friend constexpr auto operator<=>(Word, Word) = default;
};

/// Lyndon test: strictly smaller than each proper suffix.
inline bool is_lyndon(Word w)
{
	int n = w.length();
	if (n == 0)
		return false;
	for (int i = 1; i < n; ++i)
	{
		// compare w with its suffix starting at i (suffix is shorter)
		Word s = w.suffix(i);
		if (!(w < s))
			return false;
	}
	return true;
}

/// Standard factorization of a Lyndon word of length >= 2: w = u v with v the
/// longest proper Lyndon suffix.
inline std::pair<Word, Word> standard_factorization(Word w)
{
	int n = w.length();
	assert(n >= 2);
	for (int i = 1; i < n; ++i)
	{
		Word v = w.suffix(i);
		if (is_lyndon(v))
			return {w.prefix(i), v};
	}
	throw std::logic_error("standard_factorization: not a Lyndon word");
}

} // namespace cdgl

template <> struct std::hash<cdgl::Word>
{
	size_t operator()(cdgl::Word w) const noexcept
	{
		uint64_t x = w.code();
		x ^= x >> 31;
		x *= 0x7fb5d329728ea185ULL;
		x ^= x >> 27;
		return size_t(x);
	}
};
