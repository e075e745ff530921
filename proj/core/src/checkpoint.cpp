#include "progtr/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "progtr/errors.hpp"

namespace progtr {

namespace {

constexpr char kMagic[8] = {'P', 'G', 'T', 'R', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void f64(double v) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
    }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }
    void raw(const char* p, std::size_t n) { buf_.insert(buf_.end(), p, p + n); }
    const std::vector<char>& bytes() const { return buf_; }

private:
    std::vector<char> buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::vector<char> buf) : buf_(std::move(buf)) {}

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(buf_[pos_++]);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf_[pos_++])) << (8 * i);
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_++])) << (8 * i);
        return std::bit_cast<double>(bits);
    }
    std::string str() {
        std::uint32_t n = u32();
        need(n);
        std::string s(buf_.data() + pos_, n);
        pos_ += n;
        return s;
    }
    void raw(char* out, std::size_t n) {
        need(n);
        std::memcpy(out, buf_.data() + pos_, n);
        pos_ += n;
    }
    bool exhausted() const { return pos_ == buf_.size(); }

private:
    void need(std::size_t n) {
        if (pos_ + n > buf_.size()) throw CheckpointError("checkpoint truncated");
    }
    std::vector<char> buf_;
    std::size_t pos_ = 0;
};

void write_params(ByteWriter& w, const ad::ParameterSet& ps) {
    w.u32(static_cast<std::uint32_t>(ps.size()));
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const ad::Parameter& p = ps[i];
        w.str(p.name);
        w.u32(static_cast<std::uint32_t>(p.value.shape().size()));
        for (int d : p.value.shape()) w.u32(static_cast<std::uint32_t>(d));
        for (std::size_t k = 0; k < p.value.size(); ++k) w.f64(p.value[k]);
    }
}

ad::ParameterSet read_params(ByteReader& r) {
    ad::ParameterSet ps;
    std::uint32_t count = r.u32();
    for (std::uint32_t i = 0; i < count; ++i) {
        std::string name = r.str();
        std::uint32_t rank = r.u32();
        if (rank > 4) throw CheckpointError("checkpoint corrupt: tensor rank " + std::to_string(rank));
        std::vector<int> shape(rank);
        std::size_t n = 1;
        for (std::uint32_t d = 0; d < rank; ++d) {
            shape[d] = static_cast<int>(r.u32());
            n *= static_cast<std::size_t>(shape[d]);
        }
        std::vector<double> values(n);
        for (std::size_t k = 0; k < n; ++k) values[k] = r.f64();
        ps.add(std::move(name), ad::Tensor(std::move(shape), std::move(values)));
    }
    return ps;
}

} // namespace

void save_checkpoint(const Checkpoint& ck, const std::string& path) {
    if (ck.users.empty()) throw CheckpointError("checkpoint has no parameter blocks");
    ByteWriter w;
    w.raw(kMagic, sizeof(kMagic));
    w.u32(kVersion);
    w.str(ck.scenario);
    w.u32(static_cast<std::uint32_t>(ck.users.size()));
    w.u32(static_cast<std::uint32_t>(ck.config.b));
    w.u32(static_cast<std::uint32_t>(ck.config.T));
    w.u8(ck.config.input_kind == InputKind::bits ? 0 : 1);
    w.u32(static_cast<std::uint32_t>(ck.config.layers));
    w.u32(static_cast<std::uint32_t>(ck.config.state_size));
    w.u8(static_cast<std::uint8_t>(ck.channel.variant));
    w.u32(static_cast<std::uint32_t>(ck.channel.h.size()));
    for (const auto& h : ck.channel.h) {
        w.f64(h.real());
        w.f64(h.imag());
    }
    w.f64(ck.channel.twta.alpha_rho);
    w.f64(ck.channel.twta.beta_rho);
    w.f64(ck.channel.twta.alpha_psi);
    w.f64(ck.channel.twta.beta_psi);
    w.f64(ck.p_max);
    for (const auto& ps : ck.users) write_params(w, ps);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot open checkpoint for writing: " + path);
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw CheckpointError("short write to checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint: " + path);
    std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ByteReader r(std::move(buf));

    char magic[8];
    r.raw(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw CheckpointError("not a checkpoint file: " + path);
    }
    std::uint32_t version = r.u32();
    if (version != kVersion) {
        throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
    }
    Checkpoint ck;
    ck.scenario = r.str();
    std::uint32_t M = r.u32();
    ck.config.b = static_cast<int>(r.u32());
    ck.config.T = static_cast<int>(r.u32());
    ck.config.input_kind = r.u8() == 0 ? InputKind::bits : InputKind::reals;
    ck.config.layers = static_cast<int>(r.u32());
    ck.config.state_size = static_cast<int>(r.u32());
    std::uint8_t variant = r.u8();
    if (variant > 2) throw CheckpointError("checkpoint corrupt: channel variant");
    ck.channel.variant = static_cast<ChannelVariant>(variant);
    std::uint32_t nh = r.u32();
    ck.channel.h.clear();
    for (std::uint32_t i = 0; i < nh; ++i) {
        double re = r.f64();
        double im = r.f64();
        ck.channel.h.emplace_back(re, im);
    }
    ck.channel.twta.alpha_rho = r.f64();
    ck.channel.twta.beta_rho = r.f64();
    ck.channel.twta.alpha_psi = r.f64();
    ck.channel.twta.beta_psi = r.f64();
    ck.p_max = r.f64();
    for (std::uint32_t m = 0; m < M; ++m) ck.users.push_back(read_params(r));
    if (!r.exhausted()) throw CheckpointError("trailing bytes in checkpoint: " + path);
    return ck;
}

std::vector<Transceiver> instantiate(const Checkpoint& ck) {
    std::vector<Transceiver> out;
    out.reserve(ck.users.size());
    for (std::size_t m = 0; m < ck.users.size(); ++m) {
        RngStream dummy(0, "init", m); // values are overwritten below
        Transceiver tr = Transceiver::create(ck.config, dummy);
        tr.params().assign_values(ck.users[m]);
        out.push_back(std::move(tr));
    }
    return out;
}

} // namespace progtr
