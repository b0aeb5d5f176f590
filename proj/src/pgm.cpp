// Copyright (C) 2026 The degfuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "degfuse/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace degfuse {

namespace {

using Code = PgmError::Code;

/// Cursor over the raw file bytes; header tokens are whitespace separated and
/// '#' starts a comment running to end of line.
class HeaderReader {
public:
    explicit HeaderReader(const std::vector<unsigned char>& bytes) : m_bytes(bytes) {}

    std::string token() {
        skip_space_and_comments();
        std::string out;
        while (m_pos < m_bytes.size() && !std::isspace(m_bytes[m_pos]) && m_bytes[m_pos] != '#') {
            out.push_back(static_cast<char>(m_bytes[m_pos++]));
        }
        return out;
    }

    unsigned long number(const char* what) {
        const std::string tok = token();
        if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            throw PgmError(Code::malformed_header, std::string("malformed header: bad ") + what + " '" + tok + "'");
        }
        return std::stoul(tok);
    }

    /// Exactly one whitespace byte separates maxval from binary raster data.
    void consume_single_space() {
        if (m_pos >= m_bytes.size() || !std::isspace(m_bytes[m_pos])) {
            throw PgmError(Code::malformed_header, "malformed header: missing whitespace before raster");
        }
        ++m_pos;
    }

    std::size_t pos() const { return m_pos; }

private:
    void skip_space_and_comments() {
        while (m_pos < m_bytes.size()) {
            if (std::isspace(m_bytes[m_pos])) {
                ++m_pos;
            } else if (m_bytes[m_pos] == '#') {
                while (m_pos < m_bytes.size() && m_bytes[m_pos] != '\n') ++m_pos;
            } else {
                break;
            }
        }
    }

    const std::vector<unsigned char>& m_bytes;
    std::size_t m_pos = 0;
};

}  // namespace

ImagePlane load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PgmError(Code::missing_file, "cannot open '" + path.string() + "'");
    const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    HeaderReader reader(bytes);
    const std::string magic = reader.token();
    if (magic.empty()) throw PgmError(Code::malformed_header, "malformed header: empty file '" + path.string() + "'");
    if (magic != "P2" && magic != "P5") throw PgmError(Code::unsupported_magic, "unsupported magic '" + magic + "'");

    const unsigned long width = reader.number("width");
    const unsigned long height = reader.number("height");
    const unsigned long maxval = reader.number("maxval");
    if (width == 0 || height == 0) throw PgmError(Code::malformed_header, "malformed header: zero dimension");
    if (maxval == 0 || maxval > 65535) throw PgmError(Code::bad_maxval, "maxval out of range: " + std::to_string(maxval));

    ImagePlane img(height, width);
    const double scale = 1.0 / static_cast<double>(maxval);
    const std::size_t count = img.size();

    if (magic == "P2") {
        for (std::size_t i = 0; i < count; ++i) {
            const std::string tok = reader.token();
            if (tok.empty()) {
                throw PgmError(Code::truncated_payload, "truncated payload: got " + std::to_string(i) + " of " +
                                                            std::to_string(count) + " samples");
            }
            unsigned long v = 0;
            try {
                v = std::stoul(tok);
            } catch (const std::exception&) {
                throw PgmError(Code::malformed_header, "malformed sample '" + tok + "'");
            }
            img[i] = static_cast<double>(std::min(v, maxval)) * scale;
        }
        return img;
    }

    reader.consume_single_space();
    const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
    const std::size_t start = reader.pos();
    if (bytes.size() < start + count * bytes_per_sample) {
        throw PgmError(Code::truncated_payload, "truncated payload: expected " +
                                                    std::to_string(count * bytes_per_sample) + " bytes, found " +
                                                    std::to_string(bytes.size() - start));
    }
    for (std::size_t i = 0; i < count; ++i) {
        unsigned long v = bytes[start + i * bytes_per_sample];
        if (bytes_per_sample == 2) v = (v << 8) | bytes[start + i * 2 + 1];
        img[i] = static_cast<double>(std::min(v, maxval)) * scale;
    }
    return img;
}

void save_pgm(const ImagePlane& img, const std::filesystem::path& path, int maxval) {
    if (maxval != 255 && maxval != 65535) {
        throw PgmError(Code::bad_maxval, "save_pgm: maxval must be 255 or 65535, got " + std::to_string(maxval));
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PgmError(Code::unwritable_path, "cannot write '" + path.string() + "'");

    out << "P5\n" << img.width() << ' ' << img.height() << '\n' << maxval << '\n';
    std::vector<unsigned char> raster;
    raster.reserve(img.size() * (maxval > 255 ? 2 : 1));
    for (double v : img.values()) {
        const double clamped = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
        const auto q = static_cast<unsigned>(std::floor(clamped * maxval + 0.5));
        if (maxval > 255) raster.push_back(static_cast<unsigned char>(q >> 8));
        raster.push_back(static_cast<unsigned char>(q & 0xff));
    }
    out.write(reinterpret_cast<const char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
    if (!out) throw PgmError(Code::unwritable_path, "write failed for '" + path.string() + "'");
}

}  // namespace degfuse
