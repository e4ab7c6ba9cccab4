#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sketch3d {

/// H×W grid of booleans, row-major.
class BinaryImage {
public:
    BinaryImage(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool operator()(std::size_t r, std::size_t c) const { return bits_[r * cols_ + c] != 0; }
    void set(std::size_t r, std::size_t c, bool value = true) { bits_[r * cols_ + c] = value ? 1 : 0; }
    bool contains(long long r, long long c) const {
        return r >= 0 && c >= 0 && static_cast<std::size_t>(r) < rows_ && static_cast<std::size_t>(c) < cols_;
    }

    std::size_t count() const;

    friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

private:
    std::size_t rows_, cols_;
    std::vector<std::uint8_t> bits_;
};

using BinaryMask = BinaryImage;

/// Binary PGM (P5, maxval 255). Writing maps true to 255; reading treats any
/// value >= half of maxval as true.
std::string encode_pgm(const BinaryImage& image);
BinaryImage decode_pgm(std::string_view data);
BinaryImage read_pgm(const std::filesystem::path& path);
void write_pgm(const BinaryImage& image, const std::filesystem::path& path);

}  // namespace sketch3d
