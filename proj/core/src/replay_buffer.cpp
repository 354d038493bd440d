#include "tasac/replay_buffer.hpp"

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>

#include "tasac/errors.hpp"

namespace tasac {

namespace {

constexpr std::uint32_t kMagic = 0x52504252;  // "RPBR"
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw config_error("replay snapshot: truncated file");
    return v;
}

void write_vec(std::ostream& os, const Vec& v) {
    write_pod<std::uint64_t>(os, v.size());
    os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

Vec read_vec(std::istream& is) {
    const auto n = read_pod<std::uint64_t>(is);
    Vec v(n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw config_error("replay snapshot: truncated vector");
    return v;
}

}  // namespace

bool Transition::finite() const {
    return all_finite(obs) && all_finite(action) && std::isfinite(reward) && all_finite(next_obs);
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw config_error("replay: capacity must be > 0");
    storage_.reserve(std::min<std::size_t>(capacity, 4096));
}

void ReplayBuffer::push(Transition tr) {
    if (!tr.finite()) throw std::invalid_argument("replay: non-finite transition rejected");
    // tanh-squashed actions live in [-1, 1]; the closed bounds are reachable
    // once the pre-squash mean saturates in double precision
    for (double a : tr.action)
        if (a < -1.0 || a > 1.0)
            throw std::invalid_argument("replay: action outside the unit interval rejected");
    if (fill_ < capacity_) {
        storage_.push_back(std::move(tr));
        ++fill_;
        cursor_ = fill_ % capacity_;
    } else {
        storage_[cursor_] = std::move(tr);
        cursor_ = (cursor_ + 1) % capacity_;
    }
}

std::optional<std::vector<Transition>> ReplayBuffer::sample(std::size_t batch_size,
                                                            Rng& rng) const {
    if (batch_size == 0) throw usage_error("replay: batch_size must be > 0");
    if (fill_ < batch_size) return std::nullopt;
    std::vector<Transition> batch;
    batch.reserve(batch_size);
    for (std::size_t i = 0; i < batch_size; ++i) batch.push_back(storage_[rng.uniform_index(fill_)]);
    return batch;
}

void ReplayBuffer::save(std::ostream& os) const {
    write_pod(os, kMagic);
    write_pod(os, kVersion);
    write_pod<std::uint64_t>(os, capacity_);
    write_pod<std::uint64_t>(os, fill_);
    write_pod<std::uint64_t>(os, cursor_);
    for (std::size_t i = 0; i < fill_; ++i) {
        const Transition& tr = storage_[i];
        write_vec(os, tr.obs);
        write_vec(os, tr.action);
        write_pod(os, tr.reward);
        write_vec(os, tr.next_obs);
        write_pod<std::uint8_t>(os, tr.done ? 1 : 0);
    }
}

ReplayBuffer ReplayBuffer::load(std::istream& is) {
    if (read_pod<std::uint32_t>(is) != kMagic) throw config_error("replay snapshot: bad magic");
    if (read_pod<std::uint32_t>(is) != kVersion) throw config_error("replay snapshot: unsupported version");
    const auto capacity = read_pod<std::uint64_t>(is);
    const auto fill = read_pod<std::uint64_t>(is);
    const auto cursor = read_pod<std::uint64_t>(is);
    ReplayBuffer buf(capacity);
    for (std::uint64_t i = 0; i < fill; ++i) {
        Transition tr;
        tr.obs = read_vec(is);
        tr.action = read_vec(is);
        tr.reward = read_pod<double>(is);
        tr.next_obs = read_vec(is);
        tr.done = read_pod<std::uint8_t>(is) != 0;
        buf.push(std::move(tr));
    }
    buf.cursor_ = cursor;
    return buf;
}

}  // namespace tasac
