#pragma once

#include <cstddef>

namespace qif {

/// Resource limits guarding the exponential blowups this analysis can hit
/// (observation alphabets grow multiplicatively under sequential
/// composition, strategy spaces exponentially). Exceeding a cap raises
/// CapError naming the limit; the CLI maps that to a dedicated exit code.
struct Caps {
    std::size_t max_states = 100000;        ///< product state-space size
    std::size_t max_columns = 1u << 20;     ///< columns of any one matrix
    std::size_t max_strategies = 1000000;   ///< |W|^|Y| in gain transformation
};

/// Process-wide caps. Set once at startup (CLI flags); read everywhere.
Caps& caps();

} // namespace qif
