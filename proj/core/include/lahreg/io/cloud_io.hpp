#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "lahreg/geom/point_cloud.hpp"

namespace lahreg::io {

// Malformed input file. The message pins the location: 1-based line numbers
// for text, absolute byte offsets for binary payloads (-1 when not
// applicable).
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& path, std::int64_t line, std::int64_t byte,
               const std::string& detail);

    const std::string& path() const { return path_; }
    std::int64_t line() const { return line_; }
    std::int64_t byte() const { return byte_; }

  private:
    std::string path_;
    std::int64_t line_;
    std::int64_t byte_;
};

enum class PlyFormat { ascii, binary_little_endian };

// Extension dispatch: .xyz and .ply (any case). Throws std::invalid_argument
// on other extensions, ParseError on malformed content, std::runtime_error
// when the file cannot be opened or created.
geom::PointCloud read_cloud(const std::string& path);

// .xyz writes ASCII triples; .ply writes binary little-endian double
// properties, which round-trip bit exactly.
void write_cloud(const std::string& path, const geom::PointCloud& cloud);

// One "x y z" triple per line; blank lines are ignored.
geom::PointCloud read_xyz(const std::string& path);
void write_xyz(const std::string& path, const geom::PointCloud& cloud);

// Vertex x/y/z properties of any scalar numeric type are read; all other
// properties and elements are skipped, including variable-length lists.
geom::PointCloud read_ply(const std::string& path);
void write_ply(const std::string& path, const geom::PointCloud& cloud,
               PlyFormat format = PlyFormat::binary_little_endian);

}  // namespace lahreg::io
