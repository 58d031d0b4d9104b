#include "lahreg/ad/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace lahreg::ad {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error("checkpoint '" + path + "': " + what);
}

}  // namespace

void save_arrays(const std::string& path, const std::vector<NamedArray>& arrays) {
    json header;
    header["format"] = "lahreg-arrays";
    header["version"] = 1;
    header["arrays"] = json::array();
    std::uint64_t offset = 0;
    for (const NamedArray& a : arrays) {
        if (a.rows < 1 || a.cols < 1 ||
            static_cast<std::int64_t>(a.values.size()) != a.rows * a.cols) {
            fail(path, "array '" + a.name + "' has inconsistent shape");
        }
        header["arrays"].push_back(
            {{"name", a.name}, {"rows", a.rows}, {"cols", a.cols}, {"offset", offset}});
        offset += a.values.size() * sizeof(double);
    }
    const std::string text = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open for writing");
    const std::uint64_t header_len = text.size();
    out.write(reinterpret_cast<const char*>(&header_len), sizeof(header_len));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const NamedArray& a : arrays) {
        out.write(reinterpret_cast<const char*>(a.values.data()),
                  static_cast<std::streamsize>(a.values.size() * sizeof(double)));
    }
    if (!out) fail(path, "write failed");
}

std::vector<NamedArray> load_arrays(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open for reading");

    std::uint64_t header_len = 0;
    in.read(reinterpret_cast<char*>(&header_len), sizeof(header_len));
    if (!in) fail(path, "truncated header length");
    if (header_len > (1ull << 30)) fail(path, "implausible header length");

    std::string text(header_len, '\0');
    in.read(text.data(), static_cast<std::streamsize>(header_len));
    if (!in) fail(path, "truncated header");

    json header = json::parse(text, nullptr, false);
    if (header.is_discarded()) fail(path, "header is not valid JSON");
    if (header.value("format", "") != "lahreg-arrays") fail(path, "unknown format tag");
    if (header.value("version", 0) != 1) fail(path, "unsupported version");
    if (!header.contains("arrays") || !header["arrays"].is_array()) {
        fail(path, "missing arrays listing");
    }

    const std::streampos payload_start = in.tellg();
    std::vector<NamedArray> out;
    for (const auto& item : header["arrays"]) {
        NamedArray a;
        a.name = item.value("name", "");
        a.rows = item.value("rows", std::int64_t{0});
        a.cols = item.value("cols", std::int64_t{0});
        const auto offset = item.value("offset", std::uint64_t{0});
        if (a.name.empty() || a.rows < 1 || a.cols < 1) {
            fail(path, "malformed array entry");
        }
        a.values.resize(static_cast<std::size_t>(a.rows * a.cols));
        in.seekg(payload_start + static_cast<std::streamoff>(offset));
        in.read(reinterpret_cast<char*>(a.values.data()),
                static_cast<std::streamsize>(a.values.size() * sizeof(double)));
        if (!in) fail(path, "truncated payload for array '" + a.name + "'");
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace lahreg::ad
