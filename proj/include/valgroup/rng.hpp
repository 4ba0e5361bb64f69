#pragma once

#include "valgroup/rational.hpp"

#include <cstdint>

namespace valgroup {

// Deterministic splitmix64 generator. We roll our own so that seeded runs
// are reproducible independent of the standard library's distributions.
class Rng {
public:
	explicit Rng(std::uint64_t seed) : state_(seed) {}

	std::uint64_t next()
	{
		std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
		z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
		z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
		return z ^ (z >> 31);
	}

	// uniform integer in [lo, hi], inclusive
	long uniform(long lo, long hi)
	{
		return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
	}

	bool coin() { return next() & 1; }

	// small nonzero rational, numerator in [-9,9], denominator in [1,4]
	Coefficient small_rational()
	{
		long num = uniform(1, 9);
		if (coin())
			num = -num;
		return Coefficient(num, uniform(1, 4));
	}

	// small rational, possibly zero
	Coefficient small_rational_or_zero()
	{
		if (uniform(0, 4) == 0)
			return Coefficient(0);
		return small_rational();
	}

private:
	std::uint64_t state_;
};

} // namespace valgroup
