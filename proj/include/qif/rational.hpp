#pragma once

#include <gmpxx.h>

#include <string>

#include "qif/error.hpp"

namespace qif {

/// Exact rational number. All probabilities, matrix entries and gain values
/// are of this type; floating point appears only at reporting boundaries
/// (logarithms). mpq keeps values canonical (lowest terms, positive
/// denominator) through arithmetic, which is what makes posterior
/// amalgamation by exact equality sound.
using Rat = mpq_class;

/// Build a canonical rational from machine integers.
inline Rat rat(long num, long den = 1) {
    if (den == 0) throw DomainError("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

/// Parse "p/q" or "p" (arbitrary precision).
Rat rat_parse(const std::string& s);

/// Render canonically: "p" when the denominator is 1, else "p/q".
std::string rat_str(const Rat& q);

inline bool is_zero(const Rat& q) { return sgn(q) == 0; }

inline double to_double(const Rat& q) { return q.get_d(); }

/// log2 of a positive rational, robust against double overflow of p or q.
double log2_rat(const Rat& q);

} // namespace qif
