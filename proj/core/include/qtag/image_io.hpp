#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qtag/jetprep.hpp"

namespace qtag {

/**
 * Binary image container ("JIMG"):
 *   magic "JIMG" | u32 count | u32 height | u32 width   (little endian)
 *   count * height * width  f32 pixels, row-major per image
 *   count                   u8 labels
 */
struct ImageContainer {
    std::uint32_t height = 0;
    std::uint32_t width = 0;
    std::vector<float> pixels; // count * height * width
    std::vector<std::uint8_t> labels;

    std::uint32_t count() const { return static_cast<std::uint32_t>(labels.size()); }
    std::size_t image_size() const { return static_cast<std::size_t>(height) * width; }
    const float* image(std::size_t i) const { return pixels.data() + i * image_size(); }
};

ImageContainer pack_images(const std::vector<JetImage>& images);

void write_container(std::ostream& out, const ImageContainer& c);
ImageContainer read_container(std::istream& in); // throws FormatError

} // namespace qtag
