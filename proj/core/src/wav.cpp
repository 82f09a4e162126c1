#include "sonar/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace sonar {

namespace {

uint32_t read_u32(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const uint8_t* p) {
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(v & 0xff);
    out.push_back((v >> 8) & 0xff);
    out.push_back((v >> 16) & 0xff);
    out.push_back((v >> 24) & 0xff);
}

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(v & 0xff);
    out.push_back((v >> 8) & 0xff);
}

void put_tag(std::vector<uint8_t>& out, const char* tag) {
    out.insert(out.end(), tag, tag + 4);
}

}  // namespace

Signal read_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_wav: cannot open " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw std::runtime_error("read_wav: not a RIFF/WAVE file: " + path);

    int sample_rate = 0;
    int channels = 0;
    int bits = 0;
    const uint8_t* data = nullptr;
    size_t data_len = 0;

    size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const uint8_t* hdr = bytes.data() + pos;
        uint32_t chunk_len = read_u32(hdr + 4);
        const uint8_t* body = hdr + 8;
        if (pos + 8 + chunk_len > bytes.size())
            throw std::runtime_error("read_wav: truncated chunk in " + path);
        if (std::memcmp(hdr, "fmt ", 4) == 0) {
            if (chunk_len < 16) throw std::runtime_error("read_wav: short fmt chunk in " + path);
            uint16_t format = read_u16(body);
            channels = read_u16(body + 2);
            sample_rate = static_cast<int>(read_u32(body + 4));
            bits = read_u16(body + 14);
            if (format != 1) throw std::runtime_error("read_wav: only PCM supported: " + path);
        } else if (std::memcmp(hdr, "data", 4) == 0) {
            data = body;
            data_len = chunk_len;
        }
        pos += 8 + chunk_len + (chunk_len & 1);  // chunks are word-aligned
    }

    if (sample_rate == 0 || data == nullptr)
        throw std::runtime_error("read_wav: missing fmt or data chunk in " + path);
    if (channels != 1) throw std::runtime_error("read_wav: only mono supported: " + path);
    if (bits != 16) throw std::runtime_error("read_wav: only 16-bit PCM supported: " + path);

    size_t n = data_len / 2;
    Signal sig;
    sig.sample_rate_hz = sample_rate;
    sig.samples.resize(n);
    for (size_t i = 0; i < n; ++i) {
        int16_t s = static_cast<int16_t>(data[2 * i] | (data[2 * i + 1] << 8));
        sig.samples[i] = static_cast<double>(s) / 32768.0;
    }
    return sig;
}

void write_wav(const std::string& path, const Signal& sig) {
    sig.validate();
    const uint32_t n = static_cast<uint32_t>(sig.samples.size());
    const uint32_t data_len = n * 2;

    std::vector<uint8_t> out;
    out.reserve(44 + data_len);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_len);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, 1);  // PCM
    put_u16(out, 1);  // mono
    put_u32(out, static_cast<uint32_t>(sig.sample_rate_hz));
    put_u32(out, static_cast<uint32_t>(sig.sample_rate_hz) * 2);
    put_u16(out, 2);   // block align
    put_u16(out, 16);  // bits
    put_tag(out, "data");
    put_u32(out, data_len);
    for (double s : sig.samples) {
        double q = std::round(std::clamp(s, -1.0, 1.0) * 32768.0);
        int16_t v = static_cast<int16_t>(std::clamp(q, -32768.0, 32767.0));
        out.push_back(static_cast<uint8_t>(v & 0xff));
        out.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
    }

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("write_wav: cannot open " + path);
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f) throw std::runtime_error("write_wav: write failed for " + path);
}

}  // namespace sonar
