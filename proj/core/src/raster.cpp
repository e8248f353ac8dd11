#include "draftvec/raster.hpp"

#include "draftvec/error.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>

// jpeglib.h needs FILE and size_t declared first.
#include <jpeglib.h>

namespace draftvec {

RasterImage::RasterImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("RasterImage dimensions must be >= 1");
    }
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

RasterImage::RasterImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("RasterImage dimensions must be >= 1");
    }
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw std::invalid_argument("RasterImage pixel count does not match dimensions");
    }
}

std::uint8_t RasterImage::clamped(int x, int y) const {
    x = std::clamp(x, 0, width_ - 1);
    y = std::clamp(y, 0, height_ - 1);
    return pixels_[index(x, y)];
}

namespace {

std::uint8_t over_white(std::uint8_t c, std::uint8_t a) {
    return static_cast<std::uint8_t>((c * a + 255u * (255u - a) + 127u) / 255u);
}

RasterImage decode_png(std::span<const std::uint8_t> bytes) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw Error(ErrorCode::CorruptImage, std::string("png: ") + image.message);
    }
    image.format = PNG_FORMAT_RGBA;
    const auto w = static_cast<int>(image.width);
    const auto h = static_cast<int>(image.height);
    std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw Error(ErrorCode::CorruptImage, "png: " + msg);
    }
    std::vector<std::uint8_t> gray(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    for (std::size_t i = 0; i < gray.size(); ++i) {
        const std::uint8_t* p = &rgba[4 * i];
        const std::uint8_t y = luminance(p[0], p[1], p[2]);
        gray[i] = p[3] == 255 ? y : over_white(y, p[3]);
    }
    return RasterImage(w, h, std::move(gray));
}

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

RasterImage decode_jpeg(std::span<const std::uint8_t> bytes) {
    jpeg_decompress_struct cinfo{};
    JpegErrorManager err{};
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    // Buffers are declared before setjmp so a longjmp never skips a destructor.
    std::vector<std::uint8_t> gray;
    std::vector<std::uint8_t> row;
    int w = 0;
    int h = 0;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw Error(ErrorCode::CorruptImage, std::string("jpeg: ") + err.message);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    const bool is_gray = cinfo.jpeg_color_space == JCS_GRAYSCALE;
    cinfo.out_color_space = is_gray ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);
    w = static_cast<int>(cinfo.output_width);
    h = static_cast<int>(cinfo.output_height);
    const int channels = cinfo.output_components;
    gray.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
    row.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(channels));
    while (cinfo.output_scanline < cinfo.output_height) {
        const auto y = cinfo.output_scanline;
        JSAMPROW rows[1] = {row.data()};
        jpeg_read_scanlines(&cinfo, rows, 1);
        std::uint8_t* dst = &gray[static_cast<std::size_t>(y) * static_cast<std::size_t>(w)];
        for (int x = 0; x < w; ++x) {
            if (channels == 1) {
                dst[x] = row[static_cast<std::size_t>(x)];
            } else {
                const std::uint8_t* p = &row[static_cast<std::size_t>(x) * 3];
                dst[x] = luminance(p[0], p[1], p[2]);
            }
        }
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return RasterImage(w, h, std::move(gray));
}

class PgmReader {
public:
    explicit PgmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    RasterImage read() {
        const bool ascii = bytes_[1] == '2';
        pos_ = 2;
        const long w = next_int();
        const long h = next_int();
        const long maxval = next_int();
        if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) {
            throw Error(ErrorCode::CorruptImage, "pgm: bad header");
        }
        const auto n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
        std::vector<std::uint8_t> out(n);
        if (ascii) {
            for (std::size_t i = 0; i < n; ++i) {
                out[i] = scale(next_int(), maxval);
            }
        } else {
            // Exactly one whitespace byte separates maxval from the raster.
            if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
                throw Error(ErrorCode::CorruptImage, "pgm: truncated header");
            }
            ++pos_;
            const std::size_t bpp = maxval > 255 ? 2 : 1;
            if (bytes_.size() - pos_ < n * bpp) {
                throw Error(ErrorCode::CorruptImage, "pgm: truncated raster");
            }
            for (std::size_t i = 0; i < n; ++i) {
                long v = bytes_[pos_ + i * bpp];
                if (bpp == 2) {
                    v = (v << 8) | bytes_[pos_ + i * bpp + 1];
                }
                out[i] = scale(v, maxval);
            }
        }
        return RasterImage(static_cast<int>(w), static_cast<int>(h), std::move(out));
    }

private:
    static std::uint8_t scale(long v, long maxval) {
        if (v < 0 || v > maxval) {
            throw Error(ErrorCode::CorruptImage, "pgm: sample exceeds maxval");
        }
        if (maxval == 255) {
            return static_cast<std::uint8_t>(v);
        }
        return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
    }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
                    ++pos_;
                }
            } else if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    long next_int() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
            throw Error(ErrorCode::CorruptImage, "pgm: expected integer");
        }
        long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 1'000'000'000L) {
                throw Error(ErrorCode::CorruptImage, "pgm: integer overflow");
            }
            ++pos_;
        }
        return v;
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

RasterImage decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2) {
        throw Error(ErrorCode::CorruptImage, "file too short to hold an image");
    }
    static constexpr std::uint8_t kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (bytes.size() >= 8 && std::equal(std::begin(kPngMagic), std::end(kPngMagic), bytes.begin())) {
        return decode_png(bytes);
    }
    if (bytes[0] == 0xFF && bytes[1] == 0xD8) {
        return decode_jpeg(bytes);
    }
    if (bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5')) {
        return PgmReader(bytes).read();
    }
    throw Error(ErrorCode::UnsupportedFormat, "not a PNG, JPEG or PGM (P2/P5) file");
}

RasterImage load_image(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw Error(ErrorCode::FileNotFound, path.string());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::FileNotFound, path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (bytes.empty()) {
        throw Error(ErrorCode::CorruptImage, path.string() + " is empty");
    }
    return decode_image(bytes);
}

void save_pgm(const RasterImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    }
    out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    const auto px = img.pixels();
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
    if (!out) {
        throw Error(ErrorCode::IoError, "write failed: " + path.string());
    }
}

void save_png(const RasterImage& img, const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = PNG_FORMAT_GRAY;
    const std::string file = path.string();
    if (!png_image_write_to_file(&image, file.c_str(), 0, img.pixels().data(), 0, nullptr)) {
        throw Error(ErrorCode::IoError, "png write " + file + ": " + image.message);
    }
}

}  // namespace draftvec
