#include "cfiwl/f2.hpp"

#include <algorithm>
#include <bit>

namespace cfiwl {

namespace {
inline bool get_bit(const std::vector<std::uint64_t>& bits, int i) {
    return (bits[i >> 6] >> (i & 63)) & 1ULL;
}
inline void flip_bit(std::vector<std::uint64_t>& bits, int i) {
    bits[i >> 6] ^= 1ULL << (i & 63);
}
} // namespace

F2System::F2System(int num_vars)
    : nvars_(num_vars), words_((num_vars + 63) / 64), pivot_row_(num_vars, -1) {}

void F2System::reduce(Row& r) const {
    // Eliminate against existing pivot rows, lowest variable first.
    for (size_t i = 0; i < rows_.size(); ++i) {
        const int p = pivot_[i];
        if (get_bit(r.bits, p)) {
            for (int w = 0; w < words_; ++w) r.bits[w] ^= rows_[i].bits[w];
            r.rhs ^= rows_[i].rhs;
        }
    }
}

bool F2System::insert_reduced(Row&& r) {
    int pivot = -1;
    for (int w = 0; w < words_ && pivot < 0; ++w) {
        if (r.bits[w] == 0) continue;
        pivot = w * 64 + std::countr_zero(r.bits[w]);
    }
    if (pivot < 0) return r.rhs == 0; // 0 = rhs: redundant or inconsistent
    // Back-substitute into earlier rows so the matrix stays in reduced form.
    for (size_t i = 0; i < rows_.size(); ++i) {
        if (get_bit(rows_[i].bits, pivot)) {
            for (int w = 0; w < words_; ++w) rows_[i].bits[w] ^= r.bits[w];
            rows_[i].rhs ^= r.rhs;
        }
    }
    // Insert keeping pivots ascending.
    auto pos = std::lower_bound(pivot_.begin(), pivot_.end(), pivot);
    const size_t at = pos - pivot_.begin();
    pivot_.insert(pos, pivot);
    rows_.insert(rows_.begin() + at, std::move(r));
    for (int v = 0; v < nvars_; ++v)
        if (pivot_row_[v] >= static_cast<int>(at)) ++pivot_row_[v];
    pivot_row_[pivot] = static_cast<int>(at);
    return true;
}

bool F2System::add_constraint(const std::vector<int>& vars_on, bool rhs) {
    if (!consistent_) return false;
    Row r;
    r.bits.assign(words_, 0);
    for (int v : vars_on) flip_bit(r.bits, v); // repeated vars cancel over F2
    r.rhs = rhs ? 1 : 0;
    reduce(r);
    bool zero = true;
    for (int w = 0; w < words_; ++w)
        if (r.bits[w]) { zero = false; break; }
    if (zero) return r.rhs == 0; // redundant if rhs 0, inconsistent otherwise
    return insert_reduced(std::move(r));
}

bool F2System::fix_var(int v, bool rhs) { return add_constraint({v}, rhs); }

std::optional<std::vector<std::uint8_t>> F2System::lex_min_solution() const {
    if (!consistent_) return std::nullopt;
    // Greedy from the most significant variable: try 0, keep it whenever the
    // system stays consistent, otherwise the value is forced to 1. Works on a
    // scratch copy so `this` is untouched.
    F2System scratch = *this;
    std::vector<std::uint8_t> x(nvars_, 0);
    for (int v = 0; v < nvars_; ++v) {
        if (scratch.fix_var(v, false)) {
            x[v] = 0;
        } else {
            x[v] = 1;
            if (!scratch.fix_var(v, true))
                return std::nullopt; // cannot happen on a consistent system
        }
    }
    return x;
}

std::optional<std::vector<std::uint8_t>> F2System::any_solution() const {
    if (!consistent_) return std::nullopt;
    // Free variables 0; every pivot then equals its row's right-hand side
    // (each reduced row reads pivot + free vars = rhs).
    std::vector<std::uint8_t> x(nvars_, 0);
    for (size_t i = 0; i < rows_.size(); ++i) x[pivot_[i]] = rows_[i].rhs;
    return x;
}

} // namespace cfiwl
