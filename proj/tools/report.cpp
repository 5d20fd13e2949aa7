#include "report.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace primeseries::cli {

namespace {

// SHA-1 as used by git for object names.  Not a security boundary here, just
// a stable fingerprint of the run configuration.
class Sha1 {
public:
    void update(const unsigned char* data, std::size_t len) {
        total_ += len;
        while (len > 0) {
            const std::size_t room = 64 - fill_;
            const std::size_t take = len < room ? len : room;
            std::memcpy(block_.data() + fill_, data, take);
            fill_ += take;
            data += take;
            len -= take;
            if (fill_ == 64) {
                compress();
                fill_ = 0;
            }
        }
    }

    std::string hex_digest() {
        const std::uint64_t bits = total_ * 8;
        const unsigned char one = 0x80;
        update(&one, 1);
        const unsigned char zero = 0x00;
        while (fill_ != 56) update(&zero, 1);
        std::array<unsigned char, 8> length{};
        for (int i = 0; i < 8; ++i) length[i] = static_cast<unsigned char>(bits >> (56 - 8 * i));
        update(length.data(), 8);

        static const char* digits = "0123456789abcdef";
        std::string out;
        out.reserve(40);
        for (std::uint32_t word : state_)
            for (int shift = 28; shift >= 0; shift -= 4) out += digits[(word >> shift) & 0xF];
        return out;
    }

private:
    static std::uint32_t rol(std::uint32_t v, int n) { return (v << n) | (v >> (32 - n)); }

    void compress() {
        std::array<std::uint32_t, 80> w{};
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(block_[4 * i]) << 24) | (std::uint32_t(block_[4 * i + 1]) << 16) |
                   (std::uint32_t(block_[4 * i + 2]) << 8) | std::uint32_t(block_[4 * i + 3]);
        for (int i = 16; i < 80; ++i) w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);

        std::uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3], e = state_[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            const std::uint32_t t = rol(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = rol(b, 30);
            b = a;
            a = t;
        }
        state_[0] += a;
        state_[1] += b;
        state_[2] += c;
        state_[3] += d;
        state_[4] += e;
    }

    std::array<std::uint32_t, 5> state_{0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u,
                                        0xC3D2E1F0u};
    std::array<unsigned char, 64> block_{};
    std::size_t fill_ = 0;
    std::uint64_t total_ = 0;
};

} // namespace

std::string git_blob_hash(const std::string& content) {
    Sha1 sha;
    const std::string header = "blob " + std::to_string(content.size()) + '\0';
    sha.update(reinterpret_cast<const unsigned char*>(header.data()), header.size());
    sha.update(reinterpret_cast<const unsigned char*>(content.data()), content.size());
    return sha.hex_digest();
}

nlohmann::json make_report(const std::string& command,
                           const std::map<std::string, std::string>& echo) {
    std::string canonical;
    for (const auto& [key, value] : echo) canonical += key + "=" + value + "\n";

    nlohmann::json report;
    report["schema_version"] = 1;
    report["command"] = command;
    report["config"] = echo;
    report["content_hash"] = git_blob_hash(canonical);
    return report;
}

void emit_json(const nlohmann::json& report, const std::string& command,
               const std::string& out_dir, bool to_stdout) {
    if (to_stdout) std::cout << report.dump(2) << "\n";
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    const auto path = std::filesystem::path(out_dir) / (command + ".json");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << report.dump(2) << "\n";
}

void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows, const std::string& command,
              const std::string& out_dir) {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const auto path = std::filesystem::path(out_dir) / (command + ".csv");
        file.open(path);
        if (!file) throw std::runtime_error("cannot write " + path.string());
        out = &file;
    }
    for (std::size_t i = 0; i < header.size(); ++i)
        *out << header[i] << (i + 1 < header.size() ? ',' : '\n');
    for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            *out << row[i] << (i + 1 < row.size() ? ',' : '\n');
}

std::string csv_number(double value) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) return "nan";
    return std::string(buf.data(), end);
}

} // namespace primeseries::cli
