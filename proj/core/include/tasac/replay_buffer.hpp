#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "tasac/matrix.hpp"
#include "tasac/rng.hpp"

namespace tasac {

/// One replay tuple (s, a, r, s', done).
struct Transition {
    Vec obs;
    Vec action;      // raw action, componentwise in (-1, 1)
    double reward = 0.0;
    Vec next_obs;
    bool done = false;

    bool finite() const;
};

/// Fixed-capacity ring buffer with uniform with-replacement sampling.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    /// Overwrites the oldest entry once full. Non-finite transitions are
    /// rejected with an error.
    void push(Transition tr);

    /// Uniform sample of batch_size transitions (with replacement);
    /// std::nullopt while the buffer holds fewer than batch_size.
    std::optional<std::vector<Transition>> sample(std::size_t batch_size, Rng& rng) const;

    std::size_t size() const { return fill_; }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t i) const { return storage_[i]; }

    /// Versioned binary snapshot for resumable training.
    void save(std::ostream& os) const;
    static ReplayBuffer load(std::istream& is);

private:
    std::size_t capacity_;
    std::vector<Transition> storage_;
    std::size_t cursor_ = 0;
    std::size_t fill_ = 0;
};

}  // namespace tasac
