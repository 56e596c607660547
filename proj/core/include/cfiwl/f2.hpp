#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace cfiwl {

// Dense F2 linear system over a fixed variable order, with 64-bit word rows.
// Supports incremental constraint insertion (online Gaussian elimination) and
// the lexicographically least solution, where variable 0 is most significant
// and "least" means preferring 0.
class F2System {
public:
    explicit F2System(int num_vars);

    int num_vars() const { return nvars_; }

    // Adds row*x = rhs. Returns false (and leaves the system unchanged) if the
    // constraint is inconsistent with the rows added so far; returns true if
    // it was added or is redundant.
    bool add_constraint(const std::vector<int>& vars_on, bool rhs);

    // Convenience: x_v = rhs.
    bool fix_var(int v, bool rhs);

    bool consistent() const { return consistent_; }

    // Lexicographically least solution: scans variables in order, tries 0
    // first, keeps any forced value. Nullopt if inconsistent.
    std::optional<std::vector<std::uint8_t>> lex_min_solution() const;

    // Any solution (free variables 0 after back-substitution).
    std::optional<std::vector<std::uint8_t>> any_solution() const;

private:
    struct Row {
        std::vector<std::uint64_t> bits;
        std::uint8_t rhs = 0;
    };

    int nvars_;
    int words_;
    bool consistent_ = true;
    std::vector<Row> rows_;      // rows_[i] has pivot pivot_[i]
    std::vector<int> pivot_;     // ascending
    std::vector<int> pivot_row_; // var -> row index or -1

    void reduce(Row& r) const;
    bool insert_reduced(Row&& r);
};

} // namespace cfiwl
