#include "qif/matrix.hpp"

#include <algorithm>

#include "qif/caps.hpp"

namespace qif {

namespace {

Rat sparse_at(const SparseRow& row, std::uint32_t c) {
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const auto& e, std::uint32_t col) { return e.first < col; });
    if (it != row.end() && it->first == c) return it->second;
    return Rat(0);
}

SparseRow row_from_dense(const std::vector<Rat>& dense) {
    SparseRow r;
    for (std::size_t c = 0; c < dense.size(); ++c) {
        if (sgn(dense[c]) < 0) throw DomainError("negative matrix entry");
        if (sgn(dense[c]) != 0) r.emplace_back(static_cast<std::uint32_t>(c), dense[c]);
    }
    return r;
}

void check_sparse_shape(const std::vector<SparseRow>& data, std::size_t ncols) {
    for (const auto& row : data) {
        std::uint32_t prev = 0;
        bool first = true;
        for (const auto& [c, v] : row) {
            if (c >= ncols) throw DomainError("sparse column index out of range");
            if (!first && c <= prev) throw DomainError("sparse row not strictly sorted");
            if (sgn(v) <= 0) throw DomainError("sparse rows must hold positive entries only");
            prev = c;
            first = false;
        }
    }
}

} // namespace

Rat StochMatrix::at(std::size_t r, std::size_t c) const {
    return sparse_at(data[r], static_cast<std::uint32_t>(c));
}

std::vector<Rat> StochMatrix::dense_row(std::size_t r) const {
    std::vector<Rat> out(ncols(), Rat(0));
    for (const auto& [c, v] : data[r]) out[c] = v;
    return out;
}

void StochMatrix::check() const {
    if (!rows || !cols || rows->size() != data.size())
        throw DomainError("matrix shape mismatch");
    check_sparse_shape(data, ncols());
    for (const auto& row : data) {
        Rat sum = 0;
        for (const auto& [c, v] : row) sum += v;
        if (sum != 1)
            throw DomainError("matrix row sums to " + rat_str(sum) + ", not 1");
    }
}

StochMatrix StochMatrix::make(DomainPtr rows, DomainPtr cols,
                              const std::vector<std::vector<Rat>>& dense) {
    std::vector<SparseRow> data;
    data.reserve(dense.size());
    for (const auto& r : dense) {
        if (r.size() != cols->size()) throw DomainError("dense row width mismatch");
        data.push_back(row_from_dense(r));
    }
    StochMatrix out{std::move(rows), std::move(cols), std::move(data)};
    out.check();
    return out;
}

StochMatrix StochMatrix::from_sparse(DomainPtr rows, DomainPtr cols,
                                     std::vector<SparseRow> data) {
    StochMatrix out{std::move(rows), std::move(cols), std::move(data)};
    out.check();
    return out;
}

bool operator==(const StochMatrix& a, const StochMatrix& b) {
    return same_domain(a.rows, b.rows) && same_domain(a.cols, b.cols) && a.data == b.data;
}

StochMatrix identity_matrix(DomainPtr d) {
    std::vector<SparseRow> data(d->size());
    for (std::size_t i = 0; i < d->size(); ++i)
        data[i].emplace_back(static_cast<std::uint32_t>(i), Rat(1));
    return StochMatrix{d, d, std::move(data)};
}

StochMatrix null_channel(DomainPtr rows) {
    std::vector<SparseRow> data(rows->size());
    for (auto& r : data) r.emplace_back(0, Rat(1));
    return StochMatrix{std::move(rows), unit_domain(), std::move(data)};
}

StochMatrix cascade(const StochMatrix& a, const StochMatrix& b) {
    if (!same_domain(a.cols, b.rows))
        throw DomainError("cascade: inner index sets do not match");
    std::vector<SparseRow> data(a.nrows());
    std::vector<Rat> scratch(b.ncols(), Rat(0));
    std::vector<std::uint32_t> touched;
    for (std::size_t r = 0; r < a.nrows(); ++r) {
        touched.clear();
        for (const auto& [mid, av] : a.data[r]) {
            for (const auto& [c, bv] : b.data[mid]) {
                if (sgn(scratch[c]) == 0) touched.push_back(c);
                scratch[c] += av * bv;
            }
        }
        std::sort(touched.begin(), touched.end());
        SparseRow row;
        row.reserve(touched.size());
        for (auto c : touched) {
            if (sgn(scratch[c]) != 0) row.emplace_back(c, scratch[c]);
            scratch[c] = 0;
        }
        data[r] = std::move(row);
    }
    return StochMatrix{a.rows, b.cols, std::move(data)};
}

StochMatrix parallel(const StochMatrix& a, const StochMatrix& b) {
    if (!same_domain(a.rows, b.rows))
        throw DomainError("parallel: row index sets do not match");
    DomainPtr obs = flat_obs_domain(a.cols, b.cols);
    std::size_t bw = b.ncols();
    std::vector<SparseRow> data(a.nrows());
    for (std::size_t r = 0; r < a.nrows(); ++r) {
        SparseRow row;
        row.reserve(a.data[r].size() * b.data[r].size());
        for (const auto& [c1, v1] : a.data[r])
            for (const auto& [c2, v2] : b.data[r])
                row.emplace_back(static_cast<std::uint32_t>(c1 * bw + c2), v1 * v2);
        data[r] = std::move(row);
    }
    return StochMatrix{a.rows, std::move(obs), std::move(data)};
}

Rat Joint::at(std::size_t r, std::size_t c) const {
    return sparse_at(data[r], static_cast<std::uint32_t>(c));
}

void Joint::check() const {
    if (!rows || !cols || rows->size() != data.size())
        throw DomainError("joint shape mismatch");
    check_sparse_shape(data, ncols());
    Rat sum = 0;
    for (const auto& row : data)
        for (const auto& [c, v] : row) sum += v;
    if (sum != 1)
        throw DomainError("joint sums to " + rat_str(sum) + ", not 1");
}

Joint Joint::make(DomainPtr rows, DomainPtr cols,
                  const std::vector<std::vector<Rat>>& dense) {
    std::vector<SparseRow> data;
    data.reserve(dense.size());
    for (const auto& r : dense) {
        if (r.size() != cols->size()) throw DomainError("dense row width mismatch");
        data.push_back(row_from_dense(r));
    }
    Joint out{std::move(rows), std::move(cols), std::move(data)};
    out.check();
    return out;
}

Joint Joint::from_sparse(DomainPtr rows, DomainPtr cols, std::vector<SparseRow> data) {
    Joint out{std::move(rows), std::move(cols), std::move(data)};
    out.check();
    return out;
}

bool operator==(const Joint& a, const Joint& b) {
    return same_domain(a.rows, b.rows) && same_domain(a.cols, b.cols) && a.data == b.data;
}

} // namespace qif
