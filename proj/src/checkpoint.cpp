#include "coauth/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace coauth {

namespace {

constexpr char kMagic[4] = {'C', 'A', 'Q', 'N'};

template <typename T>
void put_le(std::ostream& out, T v) {
    unsigned char buf[sizeof(T)];
    std::uint64_t bits = 0;
    if constexpr (sizeof(T) == 8) bits = std::bit_cast<std::uint64_t>(v);
    else bits = static_cast<std::uint64_t>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
    unsigned char buf[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(buf), sizeof(T)))
        throw CheckpointError(CheckpointError::Kind::io, "checkpoint truncated");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    if constexpr (std::is_same_v<T, double>) return std::bit_cast<double>(bits);
    else return static_cast<T>(bits);
}

std::string dims_text(const NetworkDims& d) {
    return std::to_string(d.paper) + "/" + std::to_string(d.agent) + "/" + std::to_string(d.network) + " enc " +
           std::to_string(d.encoder) + " hidden " + std::to_string(d.hidden);
}

}  // namespace

void save_checkpoint(const QNetwork& net, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError(CheckpointError::Kind::io, "cannot write checkpoint " + path.string());
    out.write(kMagic, 4);
    put_le<std::uint32_t>(out, kCheckpointVersion);
    const NetworkDims& d = net.dims();
    for (int v : {d.paper, d.agent, d.network, d.encoder, d.hidden}) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(v));
    put_le<std::uint64_t>(out, net.params().size());
    for (double p : net.params()) put_le<double>(out, p);
    if (!out) throw CheckpointError(CheckpointError::Kind::io, "failed writing checkpoint " + path.string());
}

QNetwork load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError(CheckpointError::Kind::io, "cannot open checkpoint " + path.string());
    char magic[4];
    if (!in.read(magic, 4)) throw CheckpointError(CheckpointError::Kind::io, "checkpoint truncated");
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw CheckpointError(CheckpointError::Kind::version, "not a checkpoint file (bad magic)");
    auto version = get_le<std::uint32_t>(in);
    if (version != kCheckpointVersion)
        throw CheckpointError(CheckpointError::Kind::version,
                              "unsupported checkpoint version " + std::to_string(version));
    NetworkDims d;
    d.paper = static_cast<int>(get_le<std::uint32_t>(in));
    d.agent = static_cast<int>(get_le<std::uint32_t>(in));
    d.network = static_cast<int>(get_le<std::uint32_t>(in));
    d.encoder = static_cast<int>(get_le<std::uint32_t>(in));
    d.hidden = static_cast<int>(get_le<std::uint32_t>(in));
    QNetwork net(d);
    auto count = get_le<std::uint64_t>(in);
    if (count != net.params().size())
        throw CheckpointError(CheckpointError::Kind::dims, "parameter count does not match the stored dims");
    for (double& p : net.params()) p = get_le<double>(in);
    return net;
}

QNetwork load_checkpoint(const std::filesystem::path& path, const NetworkDims& expected) {
    QNetwork net = load_checkpoint(path);
    if (!(net.dims() == expected))
        throw CheckpointError(CheckpointError::Kind::dims,
                              "checkpoint dims " + dims_text(net.dims()) + " differ from config " + dims_text(expected));
    return net;
}

}  // namespace coauth
