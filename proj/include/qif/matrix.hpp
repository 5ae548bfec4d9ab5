#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qif/dist.hpp"
#include "qif/rational.hpp"
#include "qif/value.hpp"

namespace qif {

/// One sparse row: (column, positive weight) pairs sorted by column.
using SparseRow = std::vector<std::pair<std::uint32_t, Rat>>;

/// Row-stochastic matrix with typed row/column index sets. Rows are stored
/// sparsely (zero entries omitted); every stored entry is positive and every
/// row sums to exactly 1.
struct StochMatrix {
    DomainPtr rows;
    DomainPtr cols;
    std::vector<SparseRow> data;

    std::size_t nrows() const { return data.size(); }
    std::size_t ncols() const { return cols->size(); }

    Rat at(std::size_t r, std::size_t c) const;
    std::vector<Rat> dense_row(std::size_t r) const;

    void check() const;

    static StochMatrix make(DomainPtr rows, DomainPtr cols,
                            const std::vector<std::vector<Rat>>& dense);
    static StochMatrix from_sparse(DomainPtr rows, DomainPtr cols,
                                   std::vector<SparseRow> data);
};

bool operator==(const StochMatrix& a, const StochMatrix& b);

/// Identity markov on d.
StochMatrix identity_matrix(DomainPtr d);

/// The channel that leaks nothing: a single all-ones column over the unit
/// observation.
StochMatrix null_channel(DomainPtr rows);

/// Matrix product of row-stochastic matrices (channel cascade).
/// Requires a.cols == b.rows.
StochMatrix cascade(const StochMatrix& a, const StochMatrix& b);

/// Parallel composition: entry (x, y1*y2) = a(x,y1) * b(x,y2), with the
/// composite observation flattened. Requires a shared row index.
StochMatrix parallel(const StochMatrix& a, const StochMatrix& b);

/// Joint distribution over a product of two finite sets; same sparse layout
/// as StochMatrix but the invariant is a global sum of exactly 1.
struct Joint {
    DomainPtr rows;
    DomainPtr cols;
    std::vector<SparseRow> data;

    std::size_t nrows() const { return data.size(); }
    std::size_t ncols() const { return cols->size(); }
    Rat at(std::size_t r, std::size_t c) const;

    void check() const;

    static Joint make(DomainPtr rows, DomainPtr cols,
                      const std::vector<std::vector<Rat>>& dense);
    static Joint from_sparse(DomainPtr rows, DomainPtr cols,
                             std::vector<SparseRow> data);
};

bool operator==(const Joint& a, const Joint& b);

} // namespace qif
