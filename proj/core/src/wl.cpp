#include "cfiwl/wl.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <numeric>
#include <string>

#include "cfiwl/errors.hpp"

namespace cfiwl {

namespace {

// Interning table for int sequences (open addressing, FNV-style hash over the
// raw ints, arena storage). Ids are insertion order; callers re-rank them.
class SeqTable {
public:
    void clear() {
        arena_.clear();
        offs_.clear();
        lens_.clear();
        slots_.assign(64, -1);
        hashes_.assign(64, 0);
    }

    SeqTable() { clear(); }

    static std::uint64_t hash(const int* p, int len) {
        std::uint64_t h = 1469598103934665603ULL;
        for (int i = 0; i < len; ++i) {
            h ^= static_cast<std::uint32_t>(p[i]);
            h *= 1099511628211ULL;
        }
        return h;
    }

    int intern(const int* seq, int len) {
        if (size() * 10 >= static_cast<int>(slots_.size()) * 7) grow();
        const std::uint64_t h = hash(seq, len);
        std::size_t i = h & (slots_.size() - 1);
        while (slots_[i] >= 0) {
            const int id = slots_[i];
            if (hashes_[i] == h && lens_[id] == len &&
                std::memcmp(arena_.data() + offs_[id], seq,
                            sizeof(int) * static_cast<std::size_t>(len)) == 0)
                return id;
            i = (i + 1) & (slots_.size() - 1);
        }
        const int id = size();
        slots_[i] = id;
        hashes_[i] = h;
        offs_.push_back(static_cast<int>(arena_.size()));
        lens_.push_back(len);
        arena_.insert(arena_.end(), seq, seq + len);
        return id;
    }

    int size() const { return static_cast<int>(lens_.size()); }
    const int* data(int id) const { return arena_.data() + offs_[id]; }
    int length(int id) const { return lens_[id]; }

private:
    void grow() {
        std::vector<int> old_slots = std::move(slots_);
        slots_.assign(old_slots.size() * 2, -1);
        hashes_.assign(slots_.size(), 0);
        for (int id = 0; id < size(); ++id) {
            const std::uint64_t h = hash(data(id), lens_[id]);
            std::size_t i = h & (slots_.size() - 1);
            while (slots_[i] >= 0) i = (i + 1) & (slots_.size() - 1);
            slots_[i] = id;
            hashes_[i] = h;
        }
    }

    std::vector<int> arena_, offs_, lens_;
    std::vector<int> slots_;
    std::vector<std::uint64_t> hashes_;
};

// Plain lexicographic order on stored sequences.
bool seq_less(const SeqTable& t, int a, int b) {
    return std::lexicographical_compare(t.data(a), t.data(a) + t.length(a),
                                        t.data(b), t.data(b) + t.length(b));
}

// Keys of refinement rounds are stored run-length encoded as
// [old, rank_1, count_1, rank_2, count_2, ...]; the order that matters is the
// lexicographic order of the expanded sequence [old, rank_1 x count_1, ...].
bool rle_less(const SeqTable& t, int a, int b) {
    const int *pa = t.data(a), *pb = t.data(b);
    const int la = t.length(a), lb = t.length(b);
    if (pa[0] != pb[0]) return pa[0] < pb[0];
    int ia = 1, ib = 1, ra = 0, rb = 0;
    long long ca = 0, cb = 0;
    while (true) {
        if (ca == 0 && ia < la) {
            ra = pa[ia];
            ca = pa[ia + 1];
            ia += 2;
        }
        if (cb == 0 && ib < lb) {
            rb = pb[ib];
            cb = pb[ib + 1];
            ib += 2;
        }
        if (ca == 0) return cb != 0; // a exhausted: less iff b continues
        if (cb == 0) return false;
        if (ra != rb) return ra < rb;
        const long long m = std::min(ca, cb);
        ca -= m;
        cb -= m;
    }
}

// Rank ids of `table` by `less`; returns rank[id].
template <class Less>
std::vector<int> rank_ids(const SeqTable& table, Less less) {
    std::vector<int> order(table.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), less);
    std::vector<int> rank(table.size());
    for (int i = 0; i < table.size(); ++i) rank[order[i]] = i;
    return rank;
}

// Adjacency bit matrix for fast atomic types (small graphs only).
struct AdjMatrix {
    int n = 0;
    std::vector<std::uint64_t> bits;
    void build(const ColoredGraph& g) {
        n = g.n;
        bits.assign((static_cast<std::size_t>(n) * n + 63) / 64, 0);
        for (const Edge& e : g.edges) {
            set(e.first, e.second);
            set(e.second, e.first);
        }
    }
    void set(int u, int v) {
        const std::size_t i = static_cast<std::size_t>(u) * n + v;
        bits[i >> 6] |= 1ULL << (i & 63);
    }
    bool get(int u, int v) const {
        const std::size_t i = static_cast<std::size_t>(u) * n + v;
        return (bits[i >> 6] >> (i & 63)) & 1ULL;
    }
};

struct Engine {
    const std::vector<const ColoredGraph*>& graphs;
    const WlOptions& opt;
    int ng;
    bool with_rel;
    std::vector<long long> tcount;       // tuples per graph
    std::vector<std::vector<long long>> stride; // per graph, per slot
    std::vector<AdjMatrix> adj;
    std::vector<std::vector<int>> cur;   // tuple colors (dense joint ranks)
    int num_colors = 0;
    WlResult out;

    explicit Engine(const std::vector<const ColoredGraph*>& gs, const WlOptions& o)
        : graphs(gs), opt(o) {
        ng = static_cast<int>(graphs.size());
        if (ng == 0) throw invalid_input_error("wl_run: no graphs");
        if (opt.k < 1 || opt.k > 8)
            throw invalid_input_error("wl_run: k must be in [1, 8]");
        with_rel = graphs[0]->has_equivalence();
        for (const ColoredGraph* g : graphs)
            if (g == nullptr || g->has_equivalence() != with_rel)
                throw invalid_input_error("wl_run: graphs must agree on having a relation");

        const int k = opt.k;
        std::uint64_t total = 0;
        tcount.resize(ng);
        stride.assign(ng, std::vector<long long>(k, 1));
        for (int gi = 0; gi < ng; ++gi) {
            const long long n = graphs[gi]->n;
            long long t = 1;
            for (int i = 0; i < k; ++i) {
                if (n > 0 && t > static_cast<long long>(opt.max_tuples) / n + 1)
                    throw resource_cap_error("wl_run: tuple count exceeds cap");
                t *= n;
            }
            tcount[gi] = t;
            for (int s = k - 2; s >= 0; --s) stride[gi][s] = stride[gi][s + 1] * n;
            total += static_cast<std::uint64_t>(t);
            if (total > opt.max_tuples)
                throw resource_cap_error("wl_run: tuple count exceeds cap");
        }
        if (k >= 2) { // k = 1 never inspects pairwise adjacency directly
            adj.resize(ng);
            for (int gi = 0; gi < ng; ++gi) {
                if (static_cast<std::uint64_t>(graphs[gi]->n) * graphs[gi]->n > (1ULL << 31))
                    throw resource_cap_error("wl_run: graph too large for adjacency matrix");
                adj[gi].build(*graphs[gi]);
            }
        }
        cur.resize(ng);
        out.k = k;
        out.histograms.assign(ng, {});
    }

    void record_round(int round) {
        out.per_round.push_back({round, num_colors});
        for (int gi = 0; gi < ng; ++gi) {
            std::vector<long long> count(num_colors, 0);
            for (int c : cur[gi]) ++count[c];
            std::vector<std::pair<int, long long>> h;
            for (int c = 0; c < num_colors; ++c)
                if (count[c] > 0) h.push_back({c, count[c]});
            out.histograms[gi].push_back(std::move(h));
        }
    }

    void atomic_round() {
        const int k = opt.k;
        SeqTable table;
        std::vector<std::vector<int>> tmp(ng);
        std::vector<int> key;
        std::array<int, 8> u{};
        for (int gi = 0; gi < ng; ++gi) {
            const ColoredGraph& g = *graphs[gi];
            tmp[gi].resize(tcount[gi]);
            for (long long t = 0; t < tcount[gi]; ++t) {
                long long rest = t;
                for (int s = k - 1; s >= 0; --s) {
                    u[s] = static_cast<int>(rest % g.n);
                    rest /= g.n;
                }
                key.clear();
                if (k == 1) {
                    key.push_back(g.color[u[0]]);
                } else {
                    for (int i = 0; i < k; ++i) key.push_back(g.color[u[i]]);
                    for (int i = 0; i < k; ++i)
                        for (int j = 0; j < k; ++j) key.push_back(u[i] == u[j] ? 1 : 0);
                    for (int i = 0; i < k; ++i)
                        for (int j = 0; j < k; ++j)
                            key.push_back(adj[gi].get(u[i], u[j]) ? 1 : 0);
                    if (with_rel)
                        for (int i = 0; i < k; ++i)
                            for (int j = 0; j < k; ++j)
                                key.push_back(g.eq_class[u[i]] == g.eq_class[u[j]] ? 1
                                                                                   : 0);
                }
                tmp[gi][t] = table.intern(key.data(), static_cast<int>(key.size()));
            }
        }
        const std::vector<int> rank =
            rank_ids(table, [&](int a, int b) { return seq_less(table, a, b); });
        for (int gi = 0; gi < ng; ++gi) {
            cur[gi].resize(tcount[gi]);
            for (long long t = 0; t < tcount[gi]; ++t) cur[gi][t] = rank[tmp[gi][t]];
        }
        num_colors = table.size();
    }

    // One refinement step; returns the new color count.
    int refine_step() { return opt.k == 1 ? refine_k1() : refine_subst(); }

    int refine_k1() {
        SeqTable table;
        std::vector<std::vector<int>> tmp(ng);
        std::vector<int> key, section;
        // Same-class vertex lists, built once per graph per step call.
        for (int gi = 0; gi < ng; ++gi) {
            const ColoredGraph& g = *graphs[gi];
            tmp[gi].resize(g.n);
            for (int v = 0; v < g.n; ++v) {
                key.clear();
                key.push_back(cur[gi][v]);
                key.push_back(static_cast<int>(g.adj[v].size()));
                section.clear();
                for (Vertex w : g.adj[v]) section.push_back(cur[gi][w]);
                std::sort(section.begin(), section.end());
                key.insert(key.end(), section.begin(), section.end());
                if (with_rel) {
                    section.clear();
                    for (int w = 0; w < g.n; ++w)
                        if (w != v && g.eq_class[w] == g.eq_class[v])
                            section.push_back(cur[gi][w]);
                    std::sort(section.begin(), section.end());
                    key.insert(key.end(), section.begin(), section.end());
                }
                tmp[gi][v] = table.intern(key.data(), static_cast<int>(key.size()));
            }
        }
        const std::vector<int> rank =
            rank_ids(table, [&](int a, int b) { return seq_less(table, a, b); });
        for (int gi = 0; gi < ng; ++gi)
            for (int v = 0; v < graphs[gi]->n; ++v) cur[gi][v] = rank[tmp[gi][v]];
        return table.size();
    }

    int refine_subst() {
        const int k = opt.k;
        SeqTable subs; // distinct substitution k-vectors
        // Per tuple: old color, then a run-length slice over `runs`.
        std::vector<std::pair<int, int>> runs;
        std::vector<int> run_begin; // per tuple across all graphs, +1 sentinel
        std::vector<int> olds;
        std::vector<int> ids_buf, vec(k);
        std::array<int, 8> u{};

        for (int gi = 0; gi < ng; ++gi) {
            const ColoredGraph& g = *graphs[gi];
            const int n = g.n;
            const std::vector<int>& col = cur[gi];
            for (long long t = 0; t < tcount[gi]; ++t) {
                long long rest = t;
                for (int s = k - 1; s >= 0; --s) {
                    u[s] = static_cast<int>(rest % n);
                    rest /= n;
                }
                ids_buf.clear();
                for (int w = 0; w < n; ++w) {
                    for (int s = 0; s < k; ++s)
                        vec[s] = col[t + (w - u[s]) * stride[gi][s]];
                    ids_buf.push_back(subs.intern(vec.data(), k));
                }
                std::sort(ids_buf.begin(), ids_buf.end());
                olds.push_back(col[t]);
                run_begin.push_back(static_cast<int>(runs.size()));
                for (std::size_t i = 0; i < ids_buf.size();) {
                    std::size_t j = i;
                    while (j < ids_buf.size() && ids_buf[j] == ids_buf[i]) ++j;
                    runs.push_back({ids_buf[i], static_cast<int>(j - i)});
                    i = j;
                }
            }
        }
        run_begin.push_back(static_cast<int>(runs.size()));

        // Rank substitution vectors lexicographically so id order equals
        // vector order; then RLE keys compare like the expanded sequences.
        const std::vector<int> subrank =
            rank_ids(subs, [&](int a, int b) { return seq_less(subs, a, b); });
        for (auto& r : runs) r.first = subrank[r.first];

        SeqTable keys;
        std::vector<int> key;
        std::vector<int> tmp(olds.size());
        std::vector<std::pair<int, int>> local;
        for (std::size_t t = 0; t < olds.size(); ++t) {
            local.assign(runs.begin() + run_begin[t], runs.begin() + run_begin[t + 1]);
            std::sort(local.begin(), local.end());
            key.clear();
            key.push_back(olds[t]);
            for (const auto& [r, c] : local) {
                key.push_back(r);
                key.push_back(c);
            }
            tmp[t] = keys.intern(key.data(), static_cast<int>(key.size()));
        }
        const std::vector<int> rank =
            rank_ids(keys, [&](int a, int b) { return rle_less(keys, a, b); });
        std::size_t pos = 0;
        for (int gi = 0; gi < ng; ++gi)
            for (long long t = 0; t < tcount[gi]; ++t) cur[gi][t] = rank[tmp[pos++]];
        return keys.size();
    }

    WlResult run() {
        atomic_round();
        record_round(0);
        int round = 0;
        while (opt.max_rounds < 0 || round < opt.max_rounds) {
            const int before = num_colors;
            num_colors = refine_step();
            ++round;
            record_round(round);
            if (num_colors == before) {
                out.stabilized = true;
                break;
            }
        }
        out.rounds_run = round;
        if (opt.keep_colorings) out.final_coloring = cur;
        return std::move(out);
    }
};

} // namespace

std::optional<int> WlResult::distinguishing_round(int a, int b) const {
    if (a < 0 || b < 0 || a >= static_cast<int>(histograms.size()) ||
        b >= static_cast<int>(histograms.size()))
        throw invalid_input_error("distinguishing_round: graph index out of range");
    for (int r = 0; r <= rounds_run; ++r)
        if (histograms[a][r] != histograms[b][r]) return r;
    return std::nullopt;
}

WlResult wl_run(const std::vector<const ColoredGraph*>& graphs, const WlOptions& opt) {
    Engine e(graphs, opt);
    return e.run();
}

std::optional<int> wl_distinguishing_round(const ColoredGraph& a, const ColoredGraph& b,
                                           int k, std::uint64_t max_tuples) {
    WlOptions opt;
    opt.k = k;
    opt.max_tuples = max_tuples;
    return wl_run({&a, &b}, opt).distinguishing_round(0, 1);
}

int wl_stable_round(const ColoredGraph& g, int k, std::uint64_t max_tuples) {
    WlOptions opt;
    opt.k = k;
    opt.max_tuples = max_tuples;
    const WlResult r = wl_run({&g}, opt);
    return r.rounds_run - 1;
}

} // namespace cfiwl
