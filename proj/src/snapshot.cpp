#include "detform/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace detform {

namespace {

template <typename T>
void write_le(std::ostream& out, T value) {
    static_assert(sizeof(T) == 8);
    uint64_t bits;
    std::memcpy(&bits, &value, 8);
    if constexpr (std::endian::native == std::endian::big) {
        uint64_t swapped = 0;
        for (int i = 0; i < 8; ++i) swapped |= ((bits >> (8 * i)) & 0xffull) << (8 * (7 - i));
        bits = swapped;
    }
    out.write(reinterpret_cast<const char*>(&bits), 8);
}

template <typename T>
T read_le(std::istream& in) {
    static_assert(sizeof(T) == 8);
    uint64_t bits = 0;
    in.read(reinterpret_cast<char*>(&bits), 8);
    if constexpr (std::endian::native == std::endian::big) {
        uint64_t swapped = 0;
        for (int i = 0; i < 8; ++i) swapped |= ((bits >> (8 * i)) & 0xffull) << (8 * (7 - i));
        bits = swapped;
    }
    T value;
    std::memcpy(&value, &bits, 8);
    return value;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

void write_metadata(const std::string& path, const Metadata& meta) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& [key, value] : meta) out << key << " = " << value << "\n";
}

Metadata read_metadata(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    Metadata meta;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(line.substr(0, eq));
        if (!key.empty()) meta[key] = trim(line.substr(eq + 1));
    }
    return meta;
}

void save_snapshot(const std::string& path, const Trajectory& traj, const Metadata& extra) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_le<uint64_t>(out, kSnapshotMagic);
    write_le<uint64_t>(out, static_cast<uint64_t>(traj.grid.n_modes));
    write_le<uint64_t>(out, static_cast<uint64_t>(traj.frames.size()));
    for (const auto& frame : traj.frames)
        for (const auto& c : frame.coeffs) {
            write_le<double>(out, c.real());
            write_le<double>(out, c.imag());
        }
    if (!out) throw std::runtime_error("write failed: " + path);

    Metadata meta = extra;
    std::ostringstream fmt;
    fmt.precision(17);
    fmt << traj.grid.domain_length;
    meta["domain_length"] = fmt.str();
    fmt.str("");
    fmt << traj.s_start;
    meta["s_start"] = fmt.str();
    fmt.str("");
    fmt << traj.stride;
    meta["stride"] = fmt.str();
    write_metadata(path + ".meta", meta);
}

Trajectory load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    const uint64_t magic = read_le<uint64_t>(in);
    if (magic != kSnapshotMagic)
        throw std::runtime_error("bad snapshot magic in " + path);
    const uint64_t n_modes = read_le<uint64_t>(in);
    const uint64_t frame_count = read_le<uint64_t>(in);

    double domain_length = 2.0 * M_PI;
    double s_start = 0.0, stride = 0.0;
    try {
        const Metadata meta = read_metadata(path + ".meta");
        if (auto it = meta.find("domain_length"); it != meta.end())
            domain_length = std::stod(it->second);
        if (auto it = meta.find("s_start"); it != meta.end()) s_start = std::stod(it->second);
        if (auto it = meta.find("stride"); it != meta.end()) stride = std::stod(it->second);
    } catch (const std::runtime_error&) {
        if (frame_count > 1)
            throw std::runtime_error("missing .meta sidecar for multi-frame snapshot " + path);
    }

    Trajectory traj;
    traj.grid = make_grid(static_cast<int>(n_modes), domain_length);
    traj.s_start = s_start;
    traj.stride = stride;
    traj.frames.reserve(frame_count);
    for (uint64_t f = 0; f < frame_count; ++f) {
        SpectralField field(traj.grid);
        for (auto& c : field.coeffs) {
            const double re = read_le<double>(in);
            const double im = read_le<double>(in);
            c = Complex{re, im};
        }
        traj.frames.push_back(std::move(field));
    }
    if (!in) throw std::runtime_error("truncated snapshot: " + path);
    return traj;
}

void save_field(const std::string& path, const SpectralField& field, const Metadata& extra) {
    Trajectory traj;
    traj.grid = field.grid;
    traj.frames.push_back(field);
    save_snapshot(path, traj, extra);
}

SpectralField load_field(const std::string& path) {
    Trajectory traj = load_snapshot(path);
    if (traj.frames.size() != 1)
        throw std::runtime_error("expected a single-frame snapshot: " + path);
    return traj.frames.front();
}

} // namespace detform
