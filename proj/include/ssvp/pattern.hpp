#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <ssvp/error.hpp>
#include <ssvp/matrix.hpp>

namespace ssvp {

// ============================================================
// Pattern
// ============================================================

/** A 0/1 matrix stored row-major. */
class Pattern {
  public:
    Pattern(int rows, int cols, int fill = 0)
        : rows_(rows), cols_(cols), cells_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows <= 0 || cols <= 0)
            throw Error(errkind::invalid_input, "pattern dimensions must be positive");
        if (fill != 0 && fill != 1)
            throw Error(errkind::invalid_input, "pattern cells must be 0 or 1");
    }

    Pattern(int rows, int cols, std::vector<int> cells)
        : rows_(rows), cols_(cols), cells_(std::move(cells)) {
        if (rows <= 0 || cols <= 0)
            throw Error(errkind::invalid_input, "pattern dimensions must be positive");
        if (cells_.size() != static_cast<std::size_t>(rows) * cols)
            throw Error(errkind::dimension_mismatch, "pattern cell count mismatch");
        for (int c : cells_)
            if (c != 0 && c != 1)
                throw Error(errkind::invalid_input, "pattern cells must be 0 or 1");
    }

    Pattern(std::initializer_list<std::initializer_list<int>> rows)
        : rows_(static_cast<int>(rows.size())), cols_(0) {
        if (rows_ == 0) throw Error(errkind::invalid_input, "pattern dimensions must be positive");
        cols_ = static_cast<int>(rows.begin()->size());
        if (cols_ == 0) throw Error(errkind::invalid_input, "pattern dimensions must be positive");
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != cols_)
                throw Error(errkind::dimension_mismatch, "ragged pattern rows");
            for (int c : r) {
                if (c != 0 && c != 1)
                    throw Error(errkind::invalid_input, "pattern cells must be 0 or 1");
                cells_.push_back(c);
            }
        }
    }

    static Pattern identity(int n) {
        Pattern p(n, n);
        for (int i = 0; i < n; ++i) p(i, i) = 1;
        return p;
    }

    static Pattern full(int rows, int cols) { return Pattern(rows, cols, 1); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    int& operator()(int i, int j) { return cells_[static_cast<std::size_t>(i) * cols_ + j]; }
    int operator()(int i, int j) const { return cells_[static_cast<std::size_t>(i) * cols_ + j]; }

    const std::vector<int>& cells() const { return cells_; }

    Pattern transpose() const {
        Pattern out(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    int count_ones() const {
        int c = 0;
        for (int v : cells_) c += v;
        return c;
    }

    bool row_is_zero(int i) const {
        for (int j = 0; j < cols_; ++j)
            if ((*this)(i, j)) return false;
        return true;
    }

    bool col_is_zero(int j) const {
        for (int i = 0; i < rows_; ++i)
            if ((*this)(i, j)) return false;
        return true;
    }

    /** Submatrix on the given row and column index lists. */
    Pattern select(const std::vector<int>& row_idx, const std::vector<int>& col_idx) const {
        Pattern out(static_cast<int>(row_idx.size()), static_cast<int>(col_idx.size()));
        for (std::size_t i = 0; i < row_idx.size(); ++i)
            for (std::size_t j = 0; j < col_idx.size(); ++j)
                out(static_cast<int>(i), static_cast<int>(j)) = (*this)(row_idx[i], col_idx[j]);
        return out;
    }

    friend bool operator==(const Pattern& a, const Pattern& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.cells_ == b.cells_;
    }
    friend bool operator!=(const Pattern& a, const Pattern& b) { return !(a == b); }

  private:
    int rows_;
    int cols_;
    std::vector<int> cells_;
};

// ============================================================
// Graph views
// ============================================================

/**
 * Bipartite graph of a pattern: left vertices are the rows, right
 * vertices are the columns, and (i, j') is an edge iff p_ij = 1.
 */
struct Bigraph {
    int left = 0;
    int right = 0;
    std::vector<std::vector<int>> row_adj;  // columns adjacent to each row
    std::vector<std::vector<int>> col_adj;  // rows adjacent to each column

    explicit Bigraph(const Pattern& p)
        : left(p.rows()), right(p.cols()), row_adj(p.rows()), col_adj(p.cols()) {
        for (int i = 0; i < left; ++i)
            for (int j = 0; j < right; ++j)
                if (p(i, j)) {
                    row_adj[i].push_back(j);
                    col_adj[j].push_back(i);
                }
    }
};

/**
 * Loopless digraph of a square pattern: vertex per row index, arc
 * i -> j iff i != j and p_ij = 1.  Diagonal entries are ignored.
 */
struct Digraph {
    int n = 0;
    std::vector<std::vector<int>> adj;

    explicit Digraph(const Pattern& p) : n(p.rows()), adj(p.rows()) {
        if (p.rows() != p.cols())
            throw Error(errkind::invalid_input, "digraph view needs a square pattern");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && p(i, j)) adj[i].push_back(j);
    }
};

// ============================================================
// Pattern extraction from a real matrix
// ============================================================

inline constexpr double kPatternZeroTol = 1e-10;
inline constexpr double kPatternAmbiguityTol = 1e-8;

/**
 * Pattern of M relative to its largest entry: |m_ij| <= zero_tol * ||M||_max
 * maps to 0 and |m_ij| > ambiguity_tol * ||M||_max maps to 1.  Entries in
 * between cannot be classified and raise ambiguous-pattern with the list
 * of offending positions (1-based) in the message.
 */
inline Pattern pattern_of(const DenseMatrix& M, double zero_tol = kPatternZeroTol,
                          double ambiguity_tol = kPatternAmbiguityTol) {
    if (!(zero_tol >= 0.0) || !(zero_tol < ambiguity_tol))
        throw Error(errkind::invalid_input, "need 0 <= zero_tol < ambiguity_tol");
    if (!M.all_finite()) throw Error(errkind::invalid_input, "non-finite entry in pattern_of");
    const double scale = M.max_abs();
    Pattern p(M.rows(), M.cols());
    std::string band;
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) {
            const double a = std::abs(M(i, j));
            if (a > ambiguity_tol * scale) {
                p(i, j) = 1;
            } else if (a > zero_tol * scale) {
                band += " (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
            }
        }
    if (!band.empty())
        throw Error(errkind::ambiguous_pattern, "entries in the ambiguity band at" + band);
    return p;
}

/** True iff P covers Q entrywise (P has a 1 wherever Q does). */
inline bool is_superpattern(const Pattern& P, const Pattern& Q) {
    if (P.rows() != Q.rows() || P.cols() != Q.cols())
        throw Error(errkind::dimension_mismatch, "superpattern test needs equal dimensions");
    for (int i = 0; i < P.rows(); ++i)
        for (int j = 0; j < P.cols(); ++j)
            if (Q(i, j) && !P(i, j)) return false;
    return true;
}

// ============================================================
// Term rank
// ============================================================

/** A maximum set of ones, no two sharing a row or column. */
struct TermRankResult {
    int value = 0;
    std::vector<std::pair<int, int>> matching;  // (row, col), sorted by row
};

namespace detail {

inline bool kuhn_augment(const Pattern& p, int row, std::vector<char>& visited,
                         std::vector<int>& match_col) {
    for (int j = 0; j < p.cols(); ++j) {
        if (!p(row, j) || visited[j]) continue;
        visited[j] = 1;
        if (match_col[j] < 0 || kuhn_augment(p, match_col[j], visited, match_col)) {
            match_col[j] = row;
            return true;
        }
    }
    return false;
}

}  // namespace detail

/**
 * Maximum bipartite matching via augmenting paths, scanning rows
 * and columns in ascending order so the returned matching is
 * deterministic.
 */
inline TermRankResult term_rank_with_matching(const Pattern& p) {
    std::vector<int> match_col(p.cols(), -1);
    TermRankResult out;
    for (int i = 0; i < p.rows(); ++i) {
        std::vector<char> visited(p.cols(), 0);
        if (detail::kuhn_augment(p, i, visited, match_col)) ++out.value;
    }
    for (int j = 0; j < p.cols(); ++j)
        if (match_col[j] >= 0) out.matching.emplace_back(match_col[j], j);
    std::sort(out.matching.begin(), out.matching.end());
    return out;
}

inline int term_rank(const Pattern& p) { return term_rank_with_matching(p).value; }

// ============================================================
// Bigraph shape classification
// ============================================================

enum class BigraphShape { path_odd, path_even, cycle, other };

inline const char* to_string(BigraphShape s) {
    switch (s) {
        case BigraphShape::path_odd: return "path-odd";
        case BigraphShape::path_even: return "path-even";
        case BigraphShape::cycle: return "cycle-2n";
        case BigraphShape::other: return "other";
    }
    return "other";
}

/**
 * Shape tag plus, for paths and cycles, the row and column orders
 * that bring the pattern to staircase form: ones at (i,i) and
 * (i,i+1) when the walk starts on the column side, ones at (i,i)
 * and (i+1,i) when it starts on the row side, and for cycles ones
 * at (1,1),(2,1),(2,2),...,(n,n-1),(n,n),(1,n).
 */
struct BigraphClass {
    BigraphShape shape = BigraphShape::other;
    std::vector<int> row_order;
    std::vector<int> col_order;
};

namespace detail {

// Bigraph vertices indexed 0..m-1 (rows) then m..m+n-1 (columns).
inline std::vector<std::vector<int>> bigraph_adjacency(const Pattern& p) {
    const int m = p.rows(), n = p.cols();
    std::vector<std::vector<int>> adj(m + n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            if (p(i, j)) {
                adj[i].push_back(m + j);
                adj[m + j].push_back(i);
            }
    return adj;
}

inline BigraphClass walk_orders(const Pattern& p, const std::vector<std::vector<int>>& adj,
                                int start, int edges, BigraphShape shape) {
    const int m = p.rows();
    BigraphClass out;
    out.shape = shape;
    std::vector<char> used_vertex(adj.size(), 0);
    int prev = -1, cur = start;
    for (int step = 0; step <= edges; ++step) {
        if (step == edges && shape == BigraphShape::cycle) break;
        if (!used_vertex[cur]) {
            used_vertex[cur] = 1;
            if (cur < m)
                out.row_order.push_back(cur);
            else
                out.col_order.push_back(cur - m);
        }
        if (step == edges) break;
        int next = -1;
        for (int nb : adj[cur]) {
            if (nb == prev) continue;
            if (shape != BigraphShape::cycle && used_vertex[nb]) continue;
            next = nb;
            break;
        }
        prev = cur;
        cur = next;
    }
    return out;
}

}  // namespace detail

/**
 * Detects whether the bigraph of P, on all of its row and column
 * vertices, is a single path or a single cycle of length at least
 * six, and returns the traversal orders described above.  Any
 * other shape (including the 4-cycle of the full 2x2 pattern,
 * whose cycle form has no room for distinct corner positions)
 * reports "other" with empty orders.
 */
inline BigraphClass classify_bigraph(const Pattern& p) {
    const int m = p.rows(), n = p.cols();
    const int vertices = m + n;
    const auto adj = detail::bigraph_adjacency(p);
    int edges = p.count_ones();

    // Connectivity over every vertex, isolated ones included.
    std::vector<char> seen(vertices, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int nb : adj[v])
            if (!seen[nb]) {
                seen[nb] = 1;
                ++reached;
                stack.push_back(nb);
            }
    }
    if (reached != vertices) return {};

    int deg1 = 0, deg2 = 0;
    for (const auto& a : adj) {
        if (a.size() == 1) ++deg1;
        else if (a.size() == 2) ++deg2;
        else return {};
    }

    if (deg1 == 0 && deg2 == vertices && edges == vertices) {
        if (m != n || vertices < 6) return {};
        // Start at row 0, toward its smaller-indexed column neighbor.
        BigraphClass out = detail::walk_orders(p, adj, 0, edges, BigraphShape::cycle);
        return out;
    }
    if (deg1 == 2 && deg1 + deg2 == vertices && edges == vertices - 1) {
        int start = -1;
        for (int v = m; v < vertices; ++v)
            if (adj[v].size() == 1) {
                start = v;
                break;
            }
        if (start < 0)
            for (int v = 0; v < m; ++v)
                if (adj[v].size() == 1) {
                    start = v;
                    break;
                }
        const BigraphShape shape =
            vertices % 2 ? BigraphShape::path_odd : BigraphShape::path_even;
        return detail::walk_orders(p, adj, start, edges, shape);
    }
    return {};
}

/** Connected component of the bigraph: its rows and its columns. */
struct BigraphComponent {
    std::vector<int> rows;
    std::vector<int> cols;
};

/**
 * Connected components of the bigraph of P, each listing its row
 * and column indices ascending.  Isolated rows/columns form their
 * own singleton components.  Components are ordered by smallest
 * member, rows before columns.
 */
inline std::vector<BigraphComponent> bigraph_components(const Pattern& p) {
    const int m = p.rows(), n = p.cols();
    const auto adj = detail::bigraph_adjacency(p);
    std::vector<int> comp(m + n, -1);
    int ncomp = 0;
    for (int v = 0; v < m + n; ++v) {
        if (comp[v] >= 0) continue;
        std::vector<int> stack{v};
        comp[v] = ncomp;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int nb : adj[u])
                if (comp[nb] < 0) {
                    comp[nb] = ncomp;
                    stack.push_back(nb);
                }
        }
        ++ncomp;
    }
    std::vector<BigraphComponent> out(ncomp);
    for (int i = 0; i < m; ++i) out[comp[i]].rows.push_back(i);
    for (int j = 0; j < n; ++j) out[comp[m + j]].cols.push_back(j);
    return out;
}

// ============================================================
// Digraph cycle detection
// ============================================================

/**
 * True iff the loopless digraph of P (arc i -> j when i != j and
 * p_ij = 1) contains a directed cycle.  P must be square with an
 * all-ones diagonal; callers permute a maximum matching onto the
 * diagonal first.
 */
inline bool digraph_has_cycle(const Pattern& p) {
    if (p.rows() != p.cols())
        throw Error(errkind::invalid_input, "digraph cycle test needs a square pattern");
    for (int i = 0; i < p.rows(); ++i)
        if (!p(i, i))
            throw Error(errkind::invalid_input, "digraph cycle test needs an all-ones diagonal");
    const Digraph g(p);
    // 0 = unvisited, 1 = on the current DFS path, 2 = finished.
    std::vector<char> color(g.n, 0);
    std::vector<std::pair<int, std::size_t>> stack;
    for (int s = 0; s < g.n; ++s) {
        if (color[s]) continue;
        color[s] = 1;
        stack.emplace_back(s, 0);
        while (!stack.empty()) {
            auto& [v, k] = stack.back();
            if (k < g.adj[v].size()) {
                const int w = g.adj[v][k++];
                if (color[w] == 1) return true;
                if (color[w] == 0) {
                    color[w] = 1;
                    stack.emplace_back(w, 0);
                }
            } else {
                color[v] = 2;
                stack.pop_back();
            }
        }
    }
    return false;
}

// ============================================================
// Text format
// ============================================================

/**
 * Parses the row-per-line text form: characters '0' and '1',
 * spaces ignored, one line per row.  Trailing newlines are
 * tolerated; ragged rows or other characters are parse errors.
 */
inline Pattern parse_pattern(const std::string& text) {
    std::vector<std::vector<int>> rows;
    std::vector<int> current;
    std::size_t pending_blank = 0;
    auto flush = [&] {
        if (current.empty()) {
            ++pending_blank;
            return;
        }
        if (pending_blank)
            throw Error(errkind::parse_error, "blank line inside pattern text");
        rows.push_back(current);
        current.clear();
    };
    for (char c : text) {
        if (c == '\n') {
            flush();
        } else if (c == '0') {
            current.push_back(0);
        } else if (c == '1') {
            current.push_back(1);
        } else if (c != ' ' && c != '\t' && c != '\r') {
            throw Error(errkind::parse_error,
                        std::string("unexpected character '") + c + "' in pattern text");
        }
    }
    if (!current.empty()) flush();
    if (rows.empty()) throw Error(errkind::parse_error, "empty pattern text");
    const std::size_t cols = rows.front().size();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].size() != cols)
            throw Error(errkind::parse_error,
                        "ragged pattern row " + std::to_string(i + 1));
    Pattern p(static_cast<int>(rows.size()), static_cast<int>(cols));
    for (int i = 0; i < p.rows(); ++i)
        for (int j = 0; j < p.cols(); ++j) p(i, j) = rows[i][j];
    return p;
}

inline std::string serialize_pattern(const Pattern& p) {
    std::string out;
    out.reserve(static_cast<std::size_t>(p.rows()) * (p.cols() + 1));
    for (int i = 0; i < p.rows(); ++i) {
        for (int j = 0; j < p.cols(); ++j) out += p(i, j) ? '1' : '0';
        out += '\n';
    }
    return out;
}

}  // namespace ssvp
