#include "mtom/ldpc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mtom/errors.hpp"

namespace mtom {

namespace {

struct LineReader {
    std::istringstream in;
    int line_no = 0;
    std::string current;

    explicit LineReader(const std::string& text) : in(text) {}

    // Next non-empty line, as a token stream.
    std::istringstream next(const char* section) {
        while (std::getline(in, current)) {
            ++line_no;
            if (current.find_first_not_of(" \t\r") != std::string::npos)
                return std::istringstream(current);
        }
        throw FormatError(std::string("alist: truncated file, missing ") + section);
    }
};

std::vector<int> read_ints(std::istringstream ss, std::size_t expect, const char* what,
                           int line_no) {
    std::vector<int> out;
    int v;
    while (ss >> v) out.push_back(v);
    if (!ss.eof()) {
        std::string junk;
        ss.clear();
        ss >> junk;
        throw FormatError("alist line " + std::to_string(line_no) + ": bad token '" + junk +
                          "' in " + what);
    }
    if (expect != 0 && out.size() != expect)
        throw FormatError("alist line " + std::to_string(line_no) + ": expected " +
                          std::to_string(expect) + " entries in " + what + ", got " +
                          std::to_string(out.size()));
    return out;
}

// Adjacency line: 1-based indices, optionally zero-padded to the max degree.
std::vector<int> read_adjacency(std::istringstream ss, int degree, int max_degree, int bound,
                                const char* what, int line_no) {
    std::vector<int> raw;
    int v;
    while (ss >> v) raw.push_back(v);
    if (static_cast<int>(raw.size()) != degree && static_cast<int>(raw.size()) != max_degree)
        throw FormatError("alist line " + std::to_string(line_no) + ": " + what + " lists " +
                          std::to_string(raw.size()) + " entries, expected " +
                          std::to_string(degree) + " (or padded to " +
                          std::to_string(max_degree) + ")");
    std::vector<int> out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == 0) {
            if (static_cast<int>(i) < degree)
                throw FormatError("alist line " + std::to_string(line_no) +
                                  ": zero entry before the declared degree in " + what);
            continue;  // padding
        }
        if (raw[i] < 1 || raw[i] > bound)
            throw FormatError("alist line " + std::to_string(line_no) + ": index " +
                              std::to_string(raw[i]) + " out of range in " + what);
        out.push_back(raw[i] - 1);
    }
    if (static_cast<int>(out.size()) != degree)
        throw FormatError("alist line " + std::to_string(line_no) +
                          ": nonzero entry count does not match degree in " + what);
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
        throw FormatError("alist line " + std::to_string(line_no) + ": duplicate edge in " + what);
    return out;
}

// GF(2) Gauss-Jordan elimination selecting pivot columns right-to-left, so
// staircase-style parity tails come out as the parity positions.
void build_encoder(LdpcCode& code) {
    const int r = code.n_checks;
    const int n = code.n;
    const int words = (n + 63) / 64;
    std::vector<std::vector<std::uint64_t>> rows(r, std::vector<std::uint64_t>(words, 0));
    for (int i = 0; i < r; ++i)
        for (int v : code.check_vars[i]) rows[i][v / 64] ^= std::uint64_t{1} << (v % 64);

    std::vector<int> pivot_row_of_col(n, -1);
    std::vector<int> pivot_col_of_row(r, -1);
    int rank = 0;
    for (int col = n - 1; col >= 0 && rank < r; --col) {
        const int w = col / 64;
        const std::uint64_t mask = std::uint64_t{1} << (col % 64);
        int pivot = -1;
        for (int i = 0; i < r; ++i) {
            if (pivot_col_of_row[i] == -1 && (rows[i][w] & mask)) {
                pivot = i;
                break;
            }
        }
        if (pivot == -1) continue;
        pivot_row_of_col[col] = pivot;
        pivot_col_of_row[pivot] = col;
        ++rank;
        for (int i = 0; i < r; ++i) {
            if (i != pivot && (rows[i][w] & mask))
                for (int t = 0; t < words; ++t) rows[i][t] ^= rows[pivot][t];
        }
    }
    if (rank < r)
        throw CodeConstructionError("ldpc: parity-check matrix is rank deficient (rank " +
                                    std::to_string(rank) + " of " + std::to_string(r) +
                                    "), not encodable");

    code.k = n - r;
    code.info_positions.clear();
    code.parity_positions.clear();
    for (int col = 0; col < n; ++col)
        if (pivot_row_of_col[col] == -1) code.info_positions.push_back(col);

    // After Jordan elimination each pivot row reads: parity column = XOR of
    // that row's info columns. Repack those info columns as message masks.
    std::vector<int> msg_index(n, -1);
    for (int j = 0; j < code.k; ++j) msg_index[code.info_positions[j]] = j;
    const int msg_words = (code.k + 63) / 64;
    code.parity_gen.assign(r, std::vector<std::uint64_t>(msg_words, 0));
    for (int i = 0; i < r; ++i) {
        const int pcol = pivot_col_of_row[i];
        code.parity_positions.push_back(pcol);
        for (int col = 0; col < n; ++col) {
            if (col == pcol) continue;
            if (rows[i][col / 64] & (std::uint64_t{1} << (col % 64))) {
                const int j = msg_index[col];
                code.parity_gen[i][j / 64] ^= std::uint64_t{1} << (j % 64);
            }
        }
    }
}

}  // namespace

LdpcCode parse_alist(const std::string& text) {
    LineReader reader(text);

    auto dims_line = reader.next("dimensions");
    auto dims = read_ints(std::move(dims_line), 2, "dimensions", reader.line_no);
    LdpcCode code;
    code.n = dims[0];
    code.n_checks = dims[1];
    if (code.n < 1 || code.n_checks < 1 || code.n_checks >= code.n)
        throw FormatError("alist: invalid dimensions " + std::to_string(code.n) + " x " +
                          std::to_string(code.n_checks));

    auto maxdeg_line = reader.next("max degrees");
    auto maxdeg = read_ints(std::move(maxdeg_line), 2, "max degrees", reader.line_no);
    const int max_col = maxdeg[0], max_row = maxdeg[1];

    auto col_deg_line = reader.next("column degrees");
    const int col_deg_line_no = reader.line_no;
    auto col_deg = read_ints(std::move(col_deg_line), code.n, "column degrees", col_deg_line_no);
    auto row_deg_line = reader.next("row degrees");
    const int row_deg_line_no = reader.line_no;
    auto row_deg = read_ints(std::move(row_deg_line), code.n_checks, "row degrees",
                             row_deg_line_no);
    for (int d : col_deg)
        if (d < 1 || d > max_col)
            throw FormatError("alist line " + std::to_string(col_deg_line_no) +
                              ": column degree out of range");
    for (int d : row_deg)
        if (d < 1 || d > max_row)
            throw FormatError("alist line " + std::to_string(row_deg_line_no) +
                              ": row degree out of range");

    code.var_checks.resize(code.n);
    code.check_vars.resize(code.n_checks);
    for (int v = 0; v < code.n; ++v) {
        auto line = reader.next("column adjacency");
        code.var_checks[v] = read_adjacency(std::move(line), col_deg[v], max_col, code.n_checks,
                                            "column adjacency", reader.line_no);
    }
    for (int c = 0; c < code.n_checks; ++c) {
        auto line = reader.next("row adjacency");
        code.check_vars[c] = read_adjacency(std::move(line), row_deg[c], max_row, code.n,
                                            "row adjacency", reader.line_no);
    }

    // Cross-check the two adjacency sections.
    for (int c = 0; c < code.n_checks; ++c)
        for (int v : code.check_vars[c])
            if (!std::binary_search(code.var_checks[v].begin(), code.var_checks[v].end(), c))
                throw FormatError("alist: row adjacency edge (" + std::to_string(c + 1) + "," +
                                  std::to_string(v + 1) + ") missing from column lists");
    std::size_t col_edges = 0, row_edges = 0;
    for (const auto& l : code.var_checks) col_edges += l.size();
    for (const auto& l : code.check_vars) row_edges += l.size();
    if (col_edges != row_edges)
        throw FormatError("alist: edge counts disagree between column and row sections");

    build_encoder(code);
    return code;
}

LdpcCode load_alist(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_alist(ss.str());
}

std::string to_alist(const std::vector<std::vector<int>>& check_vars, int n) {
    const int r = static_cast<int>(check_vars.size());
    std::vector<std::vector<int>> var_checks(n);
    for (int c = 0; c < r; ++c)
        for (int v : check_vars[c]) var_checks[v].push_back(c);

    std::size_t max_col = 0, max_row = 0;
    for (const auto& l : var_checks) max_col = std::max(max_col, l.size());
    for (const auto& l : check_vars) max_row = std::max(max_row, l.size());

    std::ostringstream out;
    out << n << " " << r << "\n" << max_col << " " << max_row << "\n";
    for (int v = 0; v < n; ++v) out << var_checks[v].size() << (v + 1 < n ? " " : "\n");
    for (int c = 0; c < r; ++c) out << check_vars[c].size() << (c + 1 < r ? " " : "\n");
    for (int v = 0; v < n; ++v) {
        for (std::size_t i = 0; i < max_col; ++i)
            out << (i < var_checks[v].size() ? var_checks[v][i] + 1 : 0)
                << (i + 1 < max_col ? " " : "\n");
    }
    for (int c = 0; c < r; ++c) {
        for (std::size_t i = 0; i < max_row; ++i)
            out << (i < check_vars[c].size() ? check_vars[c][i] + 1 : 0)
                << (i + 1 < max_row ? " " : "\n");
    }
    return out.str();
}

std::vector<std::uint8_t> encode(const LdpcCode& code, const std::vector<std::uint8_t>& message) {
    if (static_cast<int>(message.size()) != code.k)
        throw std::invalid_argument("ldpc encode: message length must be k = " +
                                    std::to_string(code.k));
    const int msg_words = (code.k + 63) / 64;
    std::vector<std::uint64_t> msg(msg_words, 0);
    for (int j = 0; j < code.k; ++j)
        if (message[j]) msg[j / 64] ^= std::uint64_t{1} << (j % 64);

    std::vector<std::uint8_t> cw(code.n, 0);
    for (int j = 0; j < code.k; ++j) cw[code.info_positions[j]] = message[j];
    for (int i = 0; i < code.n_checks; ++i) {
        std::uint64_t acc = 0;
        for (int t = 0; t < msg_words; ++t) acc ^= code.parity_gen[i][t] & msg[t];
        cw[code.parity_positions[i]] =
            static_cast<std::uint8_t>(__builtin_popcountll(acc) & 1);
    }
    return cw;
}

bool is_codeword(const LdpcCode& code, const std::vector<std::uint8_t>& bits) {
    for (const auto& vars : code.check_vars) {
        int s = 0;
        for (int v : vars) s ^= bits[v];
        if (s) return false;
    }
    return true;
}

DecodeResult decode(const LdpcCode& code, const std::vector<double>& llr, int max_iters) {
    if (static_cast<int>(llr.size()) != code.n)
        throw std::invalid_argument("ldpc decode: LLR length must be n = " +
                                    std::to_string(code.n));

    // Flattened edge storage, check-major.
    std::vector<int> edge_var, check_begin{0};
    for (const auto& vars : code.check_vars) {
        edge_var.insert(edge_var.end(), vars.begin(), vars.end());
        check_begin.push_back(static_cast<int>(edge_var.size()));
    }
    const int n_edges = static_cast<int>(edge_var.size());
    std::vector<double> v2c(n_edges), c2v(n_edges, 0.0), total(code.n);

    DecodeResult res;
    res.bits.assign(code.n, 0);
    // A decision at exactly zero carries no information; convergence is only
    // declared when every decision is strictly signed and the syndrome clears.
    auto harden = [&](const std::vector<double>& metric) {
        bool strict = true;
        for (int v = 0; v < code.n; ++v) {
            res.bits[v] = metric[v] < 0.0 ? 1 : 0;
            if (metric[v] == 0.0) strict = false;
        }
        return strict;
    };
    if (harden(llr) && is_codeword(code, res.bits)) {
        res.converged = true;
        return res;
    }

    for (int e = 0; e < n_edges; ++e) v2c[e] = llr[edge_var[e]];

    std::vector<double> fwd, bwd;
    constexpr double kTanhClip = 1.0 - 1e-15;
    for (int iter = 1; iter <= max_iters; ++iter) {
        // Check-node update via forward/backward tanh products.
        for (int c = 0; c < code.n_checks; ++c) {
            const int b = check_begin[c], e = check_begin[c + 1];
            const int deg = e - b;
            fwd.resize(deg);
            bwd.resize(deg);
            for (int i = 0; i < deg; ++i) {
                const double t = std::tanh(0.5 * v2c[b + i]);
                fwd[i] = (i == 0) ? t : fwd[i - 1] * t;
            }
            for (int i = deg - 1; i >= 0; --i) {
                const double t = std::tanh(0.5 * v2c[b + i]);
                bwd[i] = (i == deg - 1) ? t : bwd[i + 1] * t;
            }
            for (int i = 0; i < deg; ++i) {
                double prod = 1.0;
                if (i > 0) prod *= fwd[i - 1];
                if (i + 1 < deg) prod *= bwd[i + 1];
                prod = std::clamp(prod, -kTanhClip, kTanhClip);
                c2v[b + i] = 2.0 * std::atanh(prod);
            }
        }

        // Variable-node update and posterior totals.
        for (int v = 0; v < code.n; ++v) total[v] = llr[v];
        for (int e = 0; e < n_edges; ++e) total[edge_var[e]] += c2v[e];
        for (int e = 0; e < n_edges; ++e) v2c[e] = total[edge_var[e]] - c2v[e];

        const bool strict = harden(total);
        res.iterations = iter;
        if (strict && is_codeword(code, res.bits)) {
            res.converged = true;
            return res;
        }
    }
    return res;
}

}  // namespace mtom
