#include "lahreg/io/cloud_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace lahreg::io {

namespace {

std::string location(const std::string& path, std::int64_t line, std::int64_t byte) {
    std::string loc = path;
    if (line > 0) loc += ":" + std::to_string(line);
    if (byte >= 0) loc += " (byte " + std::to_string(byte) + ")";
    return loc;
}

std::string lower_ext(const std::string& path) {
    const auto dot = path.rfind('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot create " + path);
    return out;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) tokens.push_back(tok);
    return tokens;
}

bool parse_double(const std::string& tok, double& out) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + tok.size() && end != begin;
}

// ---- PLY ----

enum class PlyType { i8, u8, i16, u16, i32, u32, f32, f64 };

struct PlyProperty {
    std::string name;
    bool is_list = false;
    PlyType type = PlyType::f32;        // scalar type, or list value type
    PlyType count_type = PlyType::u8;   // list count type
};

struct PlyElement {
    std::string name;
    std::int64_t count = 0;
    std::vector<PlyProperty> props;
};

int type_size(PlyType t) {
    switch (t) {
        case PlyType::i8:
        case PlyType::u8:
            return 1;
        case PlyType::i16:
        case PlyType::u16:
            return 2;
        case PlyType::i32:
        case PlyType::u32:
        case PlyType::f32:
            return 4;
        case PlyType::f64:
            return 8;
    }
    return 0;
}

bool type_from_name(const std::string& name, PlyType& out) {
    if (name == "char" || name == "int8") out = PlyType::i8;
    else if (name == "uchar" || name == "uint8") out = PlyType::u8;
    else if (name == "short" || name == "int16") out = PlyType::i16;
    else if (name == "ushort" || name == "uint16") out = PlyType::u16;
    else if (name == "int" || name == "int32") out = PlyType::i32;
    else if (name == "uint" || name == "uint32") out = PlyType::u32;
    else if (name == "float" || name == "float32") out = PlyType::f32;
    else if (name == "double" || name == "float64") out = PlyType::f64;
    else return false;
    return true;
}

std::uint64_t load_le(const unsigned char* p, int n) {
    std::uint64_t v = 0;
    for (int i = n - 1; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

double decode_scalar(const unsigned char* p, PlyType t) {
    switch (t) {
        case PlyType::i8:
            return static_cast<double>(static_cast<std::int8_t>(p[0]));
        case PlyType::u8:
            return static_cast<double>(p[0]);
        case PlyType::i16:
            return static_cast<double>(static_cast<std::int16_t>(load_le(p, 2)));
        case PlyType::u16:
            return static_cast<double>(load_le(p, 2));
        case PlyType::i32:
            return static_cast<double>(static_cast<std::int32_t>(load_le(p, 4)));
        case PlyType::u32:
            return static_cast<double>(load_le(p, 4));
        case PlyType::f32:
            return static_cast<double>(
                std::bit_cast<float>(static_cast<std::uint32_t>(load_le(p, 4))));
        case PlyType::f64:
            return std::bit_cast<double>(load_le(p, 8));
    }
    return 0.0;
}

struct PlyHeader {
    PlyFormat format = PlyFormat::ascii;
    std::vector<PlyElement> elements;
    std::int64_t data_begin = 0;  // byte offset of the first payload byte
    std::int64_t data_line = 0;   // line number of the first payload line
};

// Pulls one header line out of the buffer, advancing offset past the newline
// and stripping a trailing carriage return.
bool next_line(const std::string& buf, std::int64_t& offset, std::string& line) {
    if (offset >= static_cast<std::int64_t>(buf.size())) return false;
    const auto nl = buf.find('\n', static_cast<std::size_t>(offset));
    const auto end = nl == std::string::npos ? buf.size() : nl;
    line.assign(buf, static_cast<std::size_t>(offset), end - static_cast<std::size_t>(offset));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    offset = nl == std::string::npos ? static_cast<std::int64_t>(buf.size())
                                     : static_cast<std::int64_t>(nl) + 1;
    return true;
}

PlyHeader parse_ply_header(const std::string& path, const std::string& buf) {
    PlyHeader header;
    std::int64_t offset = 0;
    std::int64_t line_no = 0;
    std::string line;

    if (!next_line(buf, offset, line) || line != "ply")
        throw ParseError(path, 1, 0, "not a PLY file: first line must be \"ply\"");
    line_no = 1;

    bool have_format = false;
    bool done = false;
    while (!done) {
        if (!next_line(buf, offset, line))
            throw ParseError(path, line_no, offset, "header ends before end_header");
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        const std::string& kw = tokens[0];
        if (kw == "comment" || kw == "obj_info") continue;
        if (kw == "format") {
            if (tokens.size() != 3 || tokens[2] != "1.0")
                throw ParseError(path, line_no, -1, "bad format line: " + line);
            if (tokens[1] == "ascii") header.format = PlyFormat::ascii;
            else if (tokens[1] == "binary_little_endian")
                header.format = PlyFormat::binary_little_endian;
            else
                throw ParseError(path, line_no, -1, "unsupported PLY format " + tokens[1]);
            have_format = true;
        } else if (kw == "element") {
            if (tokens.size() != 3)
                throw ParseError(path, line_no, -1, "bad element line: " + line);
            PlyElement elem;
            elem.name = tokens[1];
            try {
                elem.count = std::stoll(tokens[2]);
            } catch (const std::exception&) {
                elem.count = -1;
            }
            if (elem.count < 0)
                throw ParseError(path, line_no, -1, "bad element count " + tokens[2]);
            header.elements.push_back(std::move(elem));
        } else if (kw == "property") {
            if (header.elements.empty())
                throw ParseError(path, line_no, -1, "property before any element");
            PlyProperty prop;
            if (tokens.size() == 5 && tokens[1] == "list") {
                prop.is_list = true;
                if (!type_from_name(tokens[2], prop.count_type) ||
                    !type_from_name(tokens[3], prop.type))
                    throw ParseError(path, line_no, -1, "unknown property type in: " + line);
                prop.name = tokens[4];
            } else if (tokens.size() == 3) {
                if (!type_from_name(tokens[1], prop.type))
                    throw ParseError(path, line_no, -1, "unknown property type " + tokens[1]);
                prop.name = tokens[2];
            } else {
                throw ParseError(path, line_no, -1, "bad property line: " + line);
            }
            header.elements.back().props.push_back(std::move(prop));
        } else if (kw == "end_header") {
            done = true;
        } else {
            throw ParseError(path, line_no, -1, "unknown header keyword " + kw);
        }
    }
    if (!have_format) throw ParseError(path, line_no, -1, "missing format line");
    header.data_begin = offset;
    header.data_line = line_no;
    return header;
}

geom::PointCloud read_ply_ascii(const std::string& path, const std::string& buf,
                                const PlyHeader& header) {
    std::int64_t offset = header.data_begin;
    std::int64_t line_no = header.data_line;
    std::string line;
    geom::PointCloud cloud;

    for (const auto& elem : header.elements) {
        const bool is_vertex = elem.name == "vertex";
        if (is_vertex) {
            bool have_x = false, have_y = false, have_z = false;
            for (const auto& prop : elem.props) {
                if (prop.is_list) continue;
                have_x |= prop.name == "x";
                have_y |= prop.name == "y";
                have_z |= prop.name == "z";
            }
            if (!have_x || !have_y || !have_z)
                throw ParseError(path, line_no, -1, "vertex element lacks x/y/z properties");
            cloud.points.reserve(static_cast<std::size_t>(elem.count));
        }
        for (std::int64_t row = 0; row < elem.count; ++row) {
            std::vector<std::string> tokens;
            do {
                if (!next_line(buf, offset, line))
                    throw ParseError(path, line_no, -1,
                                     "file ends inside element " + elem.name + " at row " +
                                         std::to_string(row));
                ++line_no;
                tokens = split_ws(line);
            } while (tokens.empty());
            std::size_t pos = 0;
            Eigen::Vector3d p = Eigen::Vector3d::Zero();
            for (const auto& prop : elem.props) {
                std::int64_t take = 1;
                if (prop.is_list) {
                    double count = 0.0;
                    if (pos >= tokens.size() || !parse_double(tokens[pos], count) || count < 0 ||
                        count != static_cast<double>(static_cast<std::int64_t>(count)))
                        throw ParseError(path, line_no, -1, "bad list count in row: " + line);
                    ++pos;
                    take = static_cast<std::int64_t>(count);
                }
                for (std::int64_t k = 0; k < take; ++k, ++pos) {
                    double v = 0.0;
                    if (pos >= tokens.size() || !parse_double(tokens[pos], v))
                        throw ParseError(path, line_no, -1,
                                         "bad " + prop.name + " value in row: " + line);
                    if (!prop.is_list) {
                        if (prop.name == "x") p.x() = v;
                        else if (prop.name == "y") p.y() = v;
                        else if (prop.name == "z") p.z() = v;
                    }
                }
            }
            if (pos != tokens.size())
                throw ParseError(path, line_no, -1, "trailing tokens in row: " + line);
            if (is_vertex) cloud.points.push_back(p);
        }
        if (is_vertex) return cloud;  // later elements carry nothing we need
    }
    throw ParseError(path, header.data_line, -1, "no vertex element");
}

geom::PointCloud read_ply_binary(const std::string& path, const std::string& buf,
                                 const PlyHeader& header) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(buf.data());
    std::int64_t offset = header.data_begin;
    const std::int64_t size = static_cast<std::int64_t>(buf.size());
    geom::PointCloud cloud;

    const auto need = [&](std::int64_t n) {
        if (offset + n > size)
            throw ParseError(path, 0, offset, "vertex data truncated");
    };

    for (const auto& elem : header.elements) {
        const bool is_vertex = elem.name == "vertex";
        bool have_x = false, have_y = false, have_z = false;
        if (is_vertex) {
            for (const auto& prop : elem.props) {
                if (prop.is_list) continue;
                have_x |= prop.name == "x";
                have_y |= prop.name == "y";
                have_z |= prop.name == "z";
            }
            if (!have_x || !have_y || !have_z)
                throw ParseError(path, 0, offset, "vertex element lacks x/y/z properties");
            cloud.points.reserve(static_cast<std::size_t>(elem.count));
        }
        for (std::int64_t row = 0; row < elem.count; ++row) {
            Eigen::Vector3d p = Eigen::Vector3d::Zero();
            for (const auto& prop : elem.props) {
                if (prop.is_list) {
                    const int csize = type_size(prop.count_type);
                    need(csize);
                    const auto count =
                        static_cast<std::int64_t>(decode_scalar(bytes + offset, prop.count_type));
                    if (count < 0) throw ParseError(path, 0, offset, "negative list count");
                    offset += csize;
                    need(count * type_size(prop.type));
                    offset += count * type_size(prop.type);
                    continue;
                }
                const int psize = type_size(prop.type);
                need(psize);
                if (is_vertex) {
                    if (prop.name == "x") p.x() = decode_scalar(bytes + offset, prop.type);
                    else if (prop.name == "y") p.y() = decode_scalar(bytes + offset, prop.type);
                    else if (prop.name == "z") p.z() = decode_scalar(bytes + offset, prop.type);
                }
                offset += psize;
            }
            if (is_vertex) cloud.points.push_back(p);
        }
        if (is_vertex) return cloud;
    }
    throw ParseError(path, 0, header.data_begin, "no vertex element");
}

void append_le(std::string& out, std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::string format_triple(const Eigen::Vector3d& p) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    return buf;
}

}  // namespace

ParseError::ParseError(const std::string& path, std::int64_t line, std::int64_t byte,
                       const std::string& detail)
    : std::runtime_error(location(path, line, byte) + ": " + detail),
      path_(path),
      line_(line),
      byte_(byte) {}

geom::PointCloud read_cloud(const std::string& path) {
    const auto ext = lower_ext(path);
    if (ext == "xyz") return read_xyz(path);
    if (ext == "ply") return read_ply(path);
    throw std::invalid_argument("read_cloud: unknown extension on " + path +
                                " (expected .xyz or .ply)");
}

void write_cloud(const std::string& path, const geom::PointCloud& cloud) {
    const auto ext = lower_ext(path);
    if (ext == "xyz") return write_xyz(path, cloud);
    if (ext == "ply") return write_ply(path, cloud);
    throw std::invalid_argument("write_cloud: unknown extension on " + path +
                                " (expected .xyz or .ply)");
}

geom::PointCloud read_xyz(const std::string& path) {
    const std::string buf = read_file(path);
    std::int64_t offset = 0;
    std::int64_t line_no = 0;
    std::string line;
    geom::PointCloud cloud;
    while (next_line(buf, offset, line)) {
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        Eigen::Vector3d p;
        if (tokens.size() != 3 || !parse_double(tokens[0], p.x()) ||
            !parse_double(tokens[1], p.y()) || !parse_double(tokens[2], p.z()))
            throw ParseError(path, line_no, -1, "expected three numeric fields, got: " + line);
        cloud.points.push_back(p);
    }
    return cloud;
}

void write_xyz(const std::string& path, const geom::PointCloud& cloud) {
    auto out = open_out(path);
    for (const auto& p : cloud.points) out << format_triple(p);
    if (!out) throw std::runtime_error("write failed on " + path);
}

geom::PointCloud read_ply(const std::string& path) {
    const std::string buf = read_file(path);
    const PlyHeader header = parse_ply_header(path, buf);
    return header.format == PlyFormat::ascii ? read_ply_ascii(path, buf, header)
                                             : read_ply_binary(path, buf, header);
}

void write_ply(const std::string& path, const geom::PointCloud& cloud, PlyFormat format) {
    std::string out = "ply\nformat ";
    out += format == PlyFormat::ascii ? "ascii" : "binary_little_endian";
    out += " 1.0\nelement vertex " + std::to_string(cloud.size());
    out += "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
    for (const auto& p : cloud.points) {
        if (format == PlyFormat::ascii) {
            out += format_triple(p);
        } else {
            append_le(out, std::bit_cast<std::uint64_t>(p.x()), 8);
            append_le(out, std::bit_cast<std::uint64_t>(p.y()), 8);
            append_le(out, std::bit_cast<std::uint64_t>(p.z()), 8);
        }
    }
    auto stream = open_out(path);
    stream.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!stream) throw std::runtime_error("write failed on " + path);
}

}  // namespace lahreg::io
