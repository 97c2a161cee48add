#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mtom {

// Binary LDPC code given by its sparse parity-check matrix. At load time the
// matrix is reduced over GF(2) to an encodable form: r pivot (parity) columns
// plus k = n - r systematic positions, with each parity bit precomputed as an
// XOR mask over the message. Codes whose H is rank deficient are rejected.
struct LdpcCode {
    int n = 0;         // variable nodes / code length
    int n_checks = 0;  // parity checks
    int k = 0;         // info length, n - n_checks (full-rank H)
    std::vector<std::vector<int>> check_vars;  // per check: variable indices, ascending
    std::vector<std::vector<int>> var_checks;  // per variable: check indices, ascending

    std::vector<int> info_positions;    // size k, ascending
    std::vector<int> parity_positions;  // size n_checks, aligned with parity_gen rows
    std::vector<std::vector<std::uint64_t>> parity_gen;  // bit masks over message words

    double rate() const { return static_cast<double>(k) / static_cast<double>(n); }
};

// Standard alist interchange. Throws FormatError carrying the offending line
// number; CodeConstructionError when H cannot be made encodable.
LdpcCode parse_alist(const std::string& text);
LdpcCode load_alist(const std::filesystem::path& path);
std::string to_alist(const std::vector<std::vector<int>>& check_vars, int n);

// Systematic encoding: message bits land on info_positions, parity bits on
// parity_positions; H*c = 0 by construction.
std::vector<std::uint8_t> encode(const LdpcCode& code, const std::vector<std::uint8_t>& message);

struct DecodeResult {
    std::vector<std::uint8_t> bits;  // hard decisions, length n
    bool converged = false;          // H*c_hat = 0 reached
    int iterations = 0;
};

// Sum-product belief propagation, flooding schedule, early exit on a valid
// codeword. LLR convention: positive favors bit 0.
DecodeResult decode(const LdpcCode& code, const std::vector<double>& llr, int max_iters = 50);

bool is_codeword(const LdpcCode& code, const std::vector<std::uint8_t>& bits);

}  // namespace mtom
