#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spikelink/rng.hpp"

namespace spikelink {

// Regular (3,6)-style LDPC code built deterministically from (n, rate,
// seed) via the socket/permutation construction: every column has weight
// 3 and every check has weight 3/(1-rate). Construction retries with a
// derived seed until the parity-check matrix has full row rank, so the
// code always carries exactly n*rate information bits.
//
// Encoding works through the reduced row echelon form of H: information
// bits occupy the free columns, parity bits solve the pivot columns.
// Decoding is flooding sum-product belief propagation with early stop on
// a zero syndrome. LLR convention: positive means bit 0.
class LdpcCode {
public:
    struct DecodeResult {
        std::vector<std::uint8_t> info_bits;
        bool converged = false;
        std::size_t iterations = 0;
    };

    LdpcCode(std::size_t n, double rate, std::uint64_t seed) : n_(n), rate_(rate) {
        if (n < 12) throw std::invalid_argument("code length too short");
        const double k_real = rate * static_cast<double>(n);
        k_ = static_cast<std::size_t>(std::llround(k_real));
        if (std::abs(k_real - static_cast<double>(k_)) > 1e-9 || k_ == 0 || k_ >= n)
            throw std::invalid_argument("rate incompatible with code length");
        m_ = n - k_;
        if ((3 * n) % m_ != 0)
            throw std::invalid_argument("no integer check weight for this (n, rate)");
        row_weight_ = 3 * n / m_;

        for (std::uint64_t attempt = 0;; ++attempt) {
            if (attempt >= 64) throw std::runtime_error("LDPC construction failed to reach full rank");
            Rng rng(derive_seed(seed, 0x6c647063ULL, attempt));
            if (!build_graph(rng)) continue;
            if (build_encoder()) break;
        }
        build_edges();
    }

    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    double rate() const { return rate_; }
    const std::vector<std::size_t>& info_columns() const { return free_cols_; }

    // True when H * bits = 0.
    bool parity_ok(const std::vector<std::uint8_t>& codeword) const {
        if (codeword.size() != n_) throw std::invalid_argument("codeword length mismatch");
        for (std::size_t r = 0; r < m_; ++r) {
            int acc = 0;
            for (std::size_t c : row_cols_[r]) acc ^= codeword[c];
            if (acc) return false;
        }
        return true;
    }

    std::vector<std::uint8_t> encode(const std::vector<std::uint8_t>& info_bits) const {
        if (info_bits.size() != k_) throw std::invalid_argument("info length must equal k");
        std::vector<std::uint8_t> cw(n_, 0);
        for (std::size_t i = 0; i < k_; ++i) cw[free_cols_[i]] = info_bits[i] & 1;
        for (std::size_t r = 0; r < m_; ++r) {
            int acc = 0;
            for (std::size_t idx : rref_free_support_[r]) acc ^= info_bits[idx] & 1;
            cw[pivot_col_[r]] = static_cast<std::uint8_t>(acc);
        }
        return cw;
    }

    DecodeResult decode(const std::vector<double>& llrs, std::size_t max_iter = 50) const {
        if (llrs.size() != n_) throw std::invalid_argument("LLR length must equal n");
        const std::size_t n_edges = edge_col_.size();
        std::vector<double> v2c(n_edges), c2v(n_edges, 0.0);
        for (std::size_t e = 0; e < n_edges; ++e) v2c[e] = clamp_llr(llrs[edge_col_[e]]);

        std::vector<std::uint8_t> bits(n_, 0);
        DecodeResult res;
        std::vector<double> fwd(row_weight_ + 1), bwd(row_weight_ + 1);
        for (std::size_t iter = 1; iter <= max_iter; ++iter) {
            // check-node update via forward/backward tanh partial products
            for (std::size_t r = 0; r < m_; ++r) {
                const auto& edges = row_edges_[r];
                const std::size_t deg = edges.size();
                fwd[0] = 1.0;
                bwd[deg] = 1.0;
                for (std::size_t j = 0; j < deg; ++j)
                    fwd[j + 1] = fwd[j] * std::tanh(0.5 * v2c[edges[j]]);
                for (std::size_t j = deg; j-- > 0;)
                    bwd[j] = bwd[j + 1] * std::tanh(0.5 * v2c[edges[j]]);
                for (std::size_t j = 0; j < deg; ++j) {
                    double t = fwd[j] * bwd[j + 1];
                    t = std::clamp(t, -0.999999999999, 0.999999999999);
                    c2v[edges[j]] = 2.0 * std::atanh(t);
                }
            }
            // variable-node update and tentative decision
            for (std::size_t c = 0; c < n_; ++c) {
                double post = llrs[c];
                for (std::size_t e : col_edges_[c]) post += c2v[e];
                bits[c] = post < 0.0 ? 1 : 0;
                for (std::size_t e : col_edges_[c]) v2c[e] = clamp_llr(post - c2v[e]);
            }
            res.iterations = iter;
            if (syndrome_zero(bits)) {
                res.converged = true;
                break;
            }
        }
        res.info_bits.resize(k_);
        for (std::size_t i = 0; i < k_; ++i) res.info_bits[i] = bits[free_cols_[i]];
        return res;
    }

private:
    static double clamp_llr(double x) { return std::clamp(x, -40.0, 40.0); }

    bool syndrome_zero(const std::vector<std::uint8_t>& bits) const {
        for (std::size_t r = 0; r < m_; ++r) {
            int acc = 0;
            for (std::size_t c : row_cols_[r]) acc ^= bits[c];
            if (acc) return false;
        }
        return true;
    }

    // Socket construction: each check index appears row_weight_ times in a
    // shuffled list; column j consumes sockets 3j..3j+2. Duplicate checks
    // within a column are swapped out with later sockets.
    bool build_graph(Rng& rng) {
        std::vector<std::size_t> sockets;
        sockets.reserve(3 * n_);
        for (std::size_t r = 0; r < m_; ++r)
            for (std::size_t w = 0; w < row_weight_; ++w) sockets.push_back(r);
        rng.shuffle(sockets);

        for (std::size_t j = 0; j < n_; ++j) {
            const std::size_t base = 3 * j;
            bool ok = false;
            for (int tries = 0; tries < 200 && !ok; ++tries) {
                ok = sockets[base] != sockets[base + 1] && sockets[base] != sockets[base + 2] &&
                     sockets[base + 1] != sockets[base + 2];
                if (ok) break;
                if (base + 3 >= sockets.size()) return false;  // no later socket to swap
                std::size_t dup = sockets[base + 1] == sockets[base] ? base + 1 : base + 2;
                const std::size_t pick =
                    base + 3 + rng.below(static_cast<std::uint64_t>(sockets.size() - base - 3));
                std::swap(sockets[dup], sockets[pick]);
            }
            if (!ok) return false;
        }

        row_cols_.assign(m_, {});
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t s = 0; s < 3; ++s) row_cols_[sockets[3 * j + s]].push_back(j);
        for (auto& cols : row_cols_) std::sort(cols.begin(), cols.end());
        return true;
    }

    // Gauss-Jordan elimination of H over GF(2); fails on rank deficiency.
    bool build_encoder() {
        const std::size_t words = (n_ + 63) / 64;
        std::vector<std::vector<std::uint64_t>> rows(m_, std::vector<std::uint64_t>(words, 0));
        for (std::size_t r = 0; r < m_; ++r)
            for (std::size_t c : row_cols_[r]) rows[r][c / 64] ^= 1ULL << (c % 64);

        pivot_col_.assign(m_, 0);
        std::vector<std::uint8_t> is_pivot(n_, 0);
        std::size_t rank = 0;
        for (std::size_t col = 0; col < n_ && rank < m_; ++col) {
            std::size_t sel = rank;
            while (sel < m_ && !(rows[sel][col / 64] >> (col % 64) & 1)) ++sel;
            if (sel == m_) continue;
            std::swap(rows[rank], rows[sel]);
            for (std::size_t r = 0; r < m_; ++r) {
                if (r != rank && (rows[r][col / 64] >> (col % 64) & 1))
                    for (std::size_t w = 0; w < words; ++w) rows[r][w] ^= rows[rank][w];
            }
            pivot_col_[rank] = col;
            is_pivot[col] = 1;
            ++rank;
        }
        if (rank != m_) return false;

        free_cols_.clear();
        std::vector<std::size_t> info_index(n_, 0);
        for (std::size_t c = 0; c < n_; ++c) {
            if (!is_pivot[c]) {
                info_index[c] = free_cols_.size();
                free_cols_.push_back(c);
            }
        }
        rref_free_support_.assign(m_, {});
        for (std::size_t r = 0; r < m_; ++r) {
            for (std::size_t c = 0; c < n_; ++c) {
                if (is_pivot[c] || !(rows[r][c / 64] >> (c % 64) & 1)) continue;
                rref_free_support_[r].push_back(info_index[c]);
            }
        }
        return true;
    }

    void build_edges() {
        col_edges_.assign(n_, {});
        row_edges_.assign(m_, {});
        edge_col_.clear();
        for (std::size_t r = 0; r < m_; ++r) {
            for (std::size_t c : row_cols_[r]) {
                row_edges_[r].push_back(edge_col_.size());
                col_edges_[c].push_back(edge_col_.size());
                edge_col_.push_back(c);
            }
        }
    }

    std::size_t n_, k_ = 0, m_ = 0, row_weight_ = 0;
    double rate_;
    std::vector<std::vector<std::size_t>> row_cols_;
    std::vector<std::size_t> pivot_col_;
    std::vector<std::size_t> free_cols_;
    std::vector<std::vector<std::size_t>> rref_free_support_;
    std::vector<std::vector<std::size_t>> row_edges_, col_edges_;
    std::vector<std::size_t> edge_col_;
};

}  // namespace spikelink
