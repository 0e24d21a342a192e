#include "qtag/image_io.hpp"

#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "qtag/errors.hpp"

namespace qtag {

namespace {

constexpr char kMagic[4] = {'J', 'I', 'M', 'G'};

void put_u32(std::ostream& out, std::uint32_t v) {
    // little endian, byte by byte
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw FormatError("JIMG: truncated header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

} // namespace

ImageContainer pack_images(const std::vector<JetImage>& images) {
    ImageContainer c;
    if (images.empty()) return c;
    c.height = static_cast<std::uint32_t>(images.front().height);
    c.width = static_cast<std::uint32_t>(images.front().width);
    c.pixels.reserve(images.size() * c.image_size());
    c.labels.reserve(images.size());
    for (const auto& img : images) {
        if (static_cast<std::uint32_t>(img.height) != c.height ||
            static_cast<std::uint32_t>(img.width) != c.width)
            throw std::invalid_argument("pack_images: mixed image sizes");
        for (double p : img.pixels) c.pixels.push_back(static_cast<float>(p));
        c.labels.push_back(static_cast<std::uint8_t>(img.label));
    }
    return c;
}

void write_container(std::ostream& out, const ImageContainer& c) {
    out.write(kMagic, 4);
    put_u32(out, c.count());
    put_u32(out, c.height);
    put_u32(out, c.width);
    for (float v : c.pixels) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        put_u32(out, bits);
    }
    out.write(reinterpret_cast<const char*>(c.labels.data()),
              static_cast<std::streamsize>(c.labels.size()));
}

ImageContainer read_container(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError("JIMG: bad magic bytes");
    ImageContainer c;
    const std::uint32_t count = get_u32(in);
    c.height = get_u32(in);
    c.width = get_u32(in);
    if (c.height == 0 || c.width == 0)
        throw FormatError("JIMG: zero image dimensions");
    const std::size_t n_pix = static_cast<std::size_t>(count) * c.image_size();
    c.pixels.resize(n_pix);
    for (std::size_t i = 0; i < n_pix; ++i) {
        const std::uint32_t bits = get_u32(in);
        float v;
        std::memcpy(&v, &bits, 4);
        c.pixels[i] = v;
    }
    c.labels.resize(count);
    in.read(reinterpret_cast<char*>(c.labels.data()), static_cast<std::streamsize>(count));
    if (!in) throw FormatError("JIMG: truncated labels");
    for (std::uint8_t l : c.labels)
        if (l > 1) throw FormatError("JIMG: label byte out of range");
    return c;
}

} // namespace qtag
