#include "sketch3d/image.hpp"

#include <algorithm>
#include <cctype>

#include "sketch3d/error.hpp"
#include "sketch3d/text_util.hpp"

namespace sketch3d {

BinaryImage::BinaryImage(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), bits_(rows * cols, 0) {
    if (rows == 0 || cols == 0) throw InvalidInput("image dimensions must be positive");
}

std::size_t BinaryImage::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string encode_pgm(const BinaryImage& image) {
    std::string out = "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n255\n";
    out.reserve(out.size() + image.rows() * image.cols());
    for (std::size_t r = 0; r < image.rows(); ++r)
        for (std::size_t c = 0; c < image.cols(); ++c) out.push_back(image(r, c) ? '\xff' : '\0');
    return out;
}

BinaryImage decode_pgm(std::string_view data) {
    std::size_t pos = 0;
    auto next_token = [&]() -> std::string_view {
        for (;;) {
            while (pos < data.size() && std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
            if (pos < data.size() && data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        const std::size_t start = pos;
        while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
        return data.substr(start, pos - start);
    };
    if (next_token() != "P5") throw ParseError("not a binary PGM (P5)");
    long long w = 0, h = 0, maxval = 0;
    if (!detail::parse_int(next_token(), w) || !detail::parse_int(next_token(), h) ||
        !detail::parse_int(next_token(), maxval) || w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
        throw ParseError("bad PGM header");
    ++pos;  // single whitespace byte after maxval
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    const auto rows = static_cast<std::size_t>(h), cols = static_cast<std::size_t>(w);
    if (data.size() < pos + rows * cols * bytes_per) throw ParseError("truncated PGM pixel data");
    BinaryImage image(rows, cols);
    for (std::size_t i = 0; i < rows * cols; ++i) {
        unsigned value = static_cast<unsigned char>(data[pos + i * bytes_per]);
        if (bytes_per == 2) value = (value << 8) | static_cast<unsigned char>(data[pos + 2 * i + 1]);
        image.set(i / cols, i % cols, 2 * static_cast<long long>(value) >= maxval);
    }
    return image;
}

BinaryImage read_pgm(const std::filesystem::path& path) { return decode_pgm(detail::read_file(path)); }

void write_pgm(const BinaryImage& image, const std::filesystem::path& path) {
    detail::write_file(path, encode_pgm(image));
}

}  // namespace sketch3d
