#include <cmath>

#include "doctest.h"
#include "mtom/errors.hpp"
#include "mtom/ldpc.hpp"
#include "mtom/rng.hpp"
#include "support/synthetic.hpp"

using namespace mtom;

TEST_CASE("smallest parity code parses to H = [1 1 1]") {
    const std::string alist =
        "3 1\n"
        "1 3\n"
        "1 1 1\n"
        "3\n"
        "1\n"
        "1\n"
        "1\n"
        "1 2 3\n";
    const LdpcCode code = parse_alist(alist);
    CHECK(code.n == 3);
    CHECK(code.n_checks == 1);
    CHECK(code.k == 2);
    CHECK(code.check_vars[0] == std::vector<int>{0, 1, 2});
    // Every 2-bit message encodes to even parity.
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const auto cw = encode(code, {std::uint8_t(a), std::uint8_t(b)});
            CHECK(is_codeword(code, cw));
        }
}

TEST_CASE("regular (3,6) code parses with the declared degrees") {
    const std::string alist = fixtures::regular_alist(24, 3, 6, 7);
    const LdpcCode code = parse_alist(alist);
    CHECK(code.n == 24);
    CHECK(code.n_checks == 12);
    for (const auto& vc : code.var_checks) CHECK(vc.size() == 3);
    for (const auto& cv : code.check_vars) CHECK(cv.size() == 6);
}

TEST_CASE("truncated and malformed alists are named precisely") {
    const std::string good = fixtures::regular_alist(24, 3, 6, 7);
    SUBCASE("truncated file names the missing section") {
        const std::string cut = good.substr(0, good.size() / 2);
        try {
            parse_alist(cut);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(std::string(e.what()).find("adjacency") != std::string::npos);
        }
    }
    SUBCASE("missing degree lines") {
        try {
            parse_alist("10 5\n3 6\n");
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(std::string(e.what()).find("column degrees") != std::string::npos);
        }
    }
    SUBCASE("out-of-range index carries the line number") {
        std::string bad =
            "3 1\n"
            "1 3\n"
            "1 1 1\n"
            "3\n"
            "1\n"
            "1\n"
            "2\n"  // row index 2 of 1
            "1 2 3\n";
        try {
            parse_alist(bad);
            FAIL("expected FormatError");
        } catch (const FormatError& e) {
            CHECK(std::string(e.what()).find("line 7") != std::string::npos);
        }
    }
    SUBCASE("bad dimensions") {
        CHECK_THROWS_AS(parse_alist("0 0\n1 1\n"), FormatError);
    }
}

TEST_CASE("alist writer round-trips through the parser") {
    const std::string alist = fixtures::staircase_alist(40, 10, 3);
    const LdpcCode a = parse_alist(alist);
    const std::string again = to_alist(a.check_vars, a.n);
    const LdpcCode b = parse_alist(again);
    CHECK(a.check_vars == b.check_vars);
    CHECK(a.var_checks == b.var_checks);
}

TEST_CASE("encoder properties") {
    const LdpcCode code = parse_alist(fixtures::staircase_alist(60, 20, 11));
    REQUIRE(code.k == 60);
    SUBCASE("all-zero message maps to the all-zero codeword") {
        const auto cw = encode(code, std::vector<std::uint8_t>(code.k, 0));
        for (auto b : cw) CHECK(b == 0);
    }
    SUBCASE("random messages satisfy every check") {
        Rng rng(5);
        for (int t = 0; t < 20; ++t) {
            std::vector<std::uint8_t> msg(code.k);
            for (auto& b : msg) b = rng.bit();
            CHECK(is_codeword(code, encode(code, msg)));
        }
    }
    SUBCASE("flipping one message bit flips exactly that systematic bit") {
        std::vector<std::uint8_t> msg(code.k, 0);
        const auto base = encode(code, msg);
        msg[17] = 1;
        const auto flipped = encode(code, msg);
        CHECK(base[code.info_positions[17]] == 0);
        CHECK(flipped[code.info_positions[17]] == 1);
        for (int j = 0; j < code.k; ++j) {
            if (j == 17) continue;
            CHECK(base[code.info_positions[j]] == flipped[code.info_positions[j]]);
        }
    }
    SUBCASE("wrong message length is rejected") {
        CHECK_THROWS_AS(encode(code, std::vector<std::uint8_t>(code.k + 1, 0)),
                        std::invalid_argument);
    }
}

TEST_CASE("rank-deficient H is rejected at load") {
    // Third check is the sum of the first two: rank 2 of 3.
    const std::string alist =
        "4 3\n"
        "2 3\n"
        "2 2 2 2\n"
        "3 3 2\n"
        "1 3\n"
        "1 2\n"
        "2 3\n"
        "1 2\n"
        "1 2 4\n"
        "2 3 4\n"
        "1 3 0\n";
    CHECK_THROWS_AS(parse_alist(alist), CodeConstructionError);
}

TEST_CASE("decoder basics") {
    const LdpcCode code = parse_alist(fixtures::staircase_alist(60, 20, 11));
    Rng rng(9);
    std::vector<std::uint8_t> msg(code.k);
    for (auto& b : msg) b = rng.bit();
    const auto cw = encode(code, msg);

    SUBCASE("noiseless LLRs decode in at most one iteration") {
        std::vector<double> llr(code.n);
        for (int v = 0; v < code.n; ++v) llr[v] = cw[v] ? -40.0 : 40.0;
        const DecodeResult res = decode(code, llr, 50);
        CHECK(res.converged);
        CHECK(res.iterations <= 1);
        CHECK(res.bits == cw);
    }
    SUBCASE("all-zero LLRs never converge") {
        const DecodeResult res = decode(code, std::vector<double>(code.n, 0.0), 10);
        CHECK_FALSE(res.converged);
        CHECK(res.iterations == 10);
    }
    SUBCASE("wrong LLR length is rejected") {
        CHECK_THROWS_AS(decode(code, std::vector<double>(code.n + 1, 0.0), 10),
                        std::invalid_argument);
    }
    SUBCASE("decoding is deterministic") {
        std::vector<double> llr(code.n);
        Rng nrng(13);
        for (int v = 0; v < code.n; ++v)
            llr[v] = (cw[v] ? -1.0 : 1.0) * 2.0 + nrng.normal() * 1.5;
        const DecodeResult a = decode(code, llr, 50);
        const DecodeResult b = decode(code, llr, 50);
        CHECK(a.bits == b.bits);
        CHECK(a.iterations == b.iterations);
    }
}

TEST_CASE("belief propagation beats the raw channel by 10x at a good operating point") {
    // Rate-1/2 regular (3,6) code, BPSK over AWGN at Eb/N0 = 3.5 dB.
    const LdpcCode code = parse_alist(fixtures::regular_alist(512, 3, 6, 21));
    const double rate = code.rate();
    const double ebn0 = std::pow(10.0, 3.5 / 10.0);
    const double sigma2 = 1.0 / (2.0 * rate * ebn0);  // per real dimension
    Rng rng(31);

    long long pre_err = 0, post_err = 0, bits = 0;
    for (int frame = 0; frame < 400; ++frame) {
        std::vector<std::uint8_t> msg(code.k);
        for (auto& b : msg) b = rng.bit();
        const auto cw = encode(code, msg);
        std::vector<double> llr(code.n);
        for (int v = 0; v < code.n; ++v) {
            const double x = cw[v] ? -1.0 : 1.0;
            const double y = x + rng.normal() * std::sqrt(sigma2);
            llr[v] = 2.0 * y / sigma2;
            if ((llr[v] < 0) != (cw[v] != 0)) ++pre_err;
        }
        const DecodeResult res = decode(code, llr, 60);
        for (int j = 0; j < code.k; ++j)
            if (res.bits[code.info_positions[j]] != msg[j]) ++post_err;
        bits += code.k;
    }
    const double pre_ber = double(pre_err) / (400.0 * code.n);
    const double post_ber = double(post_err) / double(bits);
    CHECK(pre_ber > 1e-3);  // the operating point actually stresses the decoder
    CHECK(post_ber * 10.0 <= pre_ber);
}
