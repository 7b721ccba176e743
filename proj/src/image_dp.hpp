#pragma once

// Word counts per image subset: composing column maps shrinks images
// autonomously, so the image after each appended action is all we track.

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tileregu/error.hpp"

namespace tileregu::detail {

class ImageMapper {
public:
    ImageMapper(const std::vector<std::vector<std::uint32_t>>& maps, std::size_t N) : N_(N) {
        if (N > 64) fail(ErrorKind::TooLarge, "image subset DP supports at most 64 states");
        chunks_ = (N + 7) / 8;
        tables_.resize(maps.size());
        for (std::size_t a = 0; a < maps.size(); ++a) {
            tables_[a].assign(chunks_ * 256, 0);
            for (std::size_t c = 0; c < chunks_; ++c)
                for (unsigned byte = 0; byte < 256; ++byte) {
                    std::uint64_t img = 0;
                    for (unsigned b = 0; b < 8; ++b) {
                        std::size_t s = c * 8 + b;
                        if ((byte >> b & 1u) && s < N) img |= std::uint64_t{1} << maps[a][s];
                    }
                    tables_[a][c * 256 + byte] = img;
                }
        }
    }

    std::uint64_t image(std::size_t action, std::uint64_t set) const {
        std::uint64_t img = 0;
        const std::uint64_t* t = tables_[action].data();
        for (std::size_t c = 0; c < chunks_; ++c, set >>= 8) img |= t[c * 256 + (set & 0xFFu)];
        return img;
    }

    std::uint64_t full() const { return N_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << N_) - 1; }
    std::size_t actions() const { return tables_.size(); }

private:
    std::size_t N_, chunks_;
    std::vector<std::vector<std::uint64_t>> tables_;
};

inline bool is_singleton(std::uint64_t s) { return s != 0 && (s & (s - 1)) == 0; }

// counts[k-1] = number of length-k words whose image is not a singleton.
template <class Count>
std::vector<Count> nonsingleton_counts(const ImageMapper& mapper, int k_max) {
    std::vector<Count> out;
    std::unordered_map<std::uint64_t, Count> cur, next;
    if (!is_singleton(mapper.full())) cur.emplace(mapper.full(), Count(1));
    for (int k = 1; k <= k_max; ++k) {
        next.clear();
        Count total = 0;
        for (auto& [set, cnt] : cur)
            for (std::size_t a = 0; a < mapper.actions(); ++a) {
                std::uint64_t img = mapper.image(a, set);
                if (is_singleton(img)) continue;
                next[img] += cnt;
            }
        for (auto& kv : next) total += kv.second;
        out.push_back(total);
        cur.swap(next);
    }
    return out;
}

// Exact counts as big integers, using 128-bit arithmetic when m^k_max fits.
inline std::vector<boost::multiprecision::cpp_int> nonsingleton_counts_exact(const ImageMapper& mapper, int k_max) {
    std::vector<boost::multiprecision::cpp_int> out;
    const double bits = k_max * std::log2(static_cast<double>(std::max<std::size_t>(mapper.actions(), 2)));
    if (bits < 126.0) {
        for (auto v : nonsingleton_counts<unsigned __int128>(mapper, k_max)) {
            boost::multiprecision::cpp_int c = static_cast<std::uint64_t>(v >> 64);
            c <<= 64;
            c += static_cast<std::uint64_t>(v);
            out.push_back(c);
        }
    } else {
        out = nonsingleton_counts<boost::multiprecision::cpp_int>(mapper, k_max);
    }
    return out;
}

} // namespace tileregu::detail
