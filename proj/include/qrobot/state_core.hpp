// Copyright 2026 The qrobot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qrobot {

using Complex = std::complex<double>;

/// Largest spatial dimension a label can carry.
inline constexpr std::size_t kMaxDim = 4;

/// Amplitudes with magnitude below this are dropped from a SparseState.
inline constexpr double kPruneThreshold = 1e-14;

/// A small fixed-capacity vector of lattice coordinates or register values.
class Coords {
   public:
    Coords() = default;
    explicit Coords(std::size_t size, std::uint16_t fill = 0);
    Coords(std::initializer_list<int> values);

    std::size_t size() const {
        return size_;
    }
    std::uint16_t operator[](std::size_t i) const {
        return values_[i];
    }
    std::uint16_t &operator[](std::size_t i) {
        return values_[i];
    }
    bool all_equal(std::uint16_t v) const;

    /// Row-major flattening with radix `side`; first coordinate is most significant.
    std::uint64_t flatten(std::uint32_t side) const;
    static Coords unflatten(std::uint64_t index, std::size_t size, std::uint32_t side);

    std::string str() const;

    friend bool operator==(const Coords &, const Coords &) = default;
    friend auto operator<=>(const Coords &, const Coords &) = default;

   private:
    std::array<std::uint16_t, kMaxDim> values_{};
    std::uint8_t size_ = 0;
};

/// Output symbol of the robot: dn, +x_a, -x_a or look.
class Output {
   public:
    static constexpr Output done() {
        return Output(0);
    }
    static constexpr Output advance(std::size_t axis) {
        return Output(static_cast<std::uint8_t>(1 + 2 * axis));
    }
    static constexpr Output retreat(std::size_t axis) {
        return Output(static_cast<std::uint8_t>(2 + 2 * axis));
    }
    static constexpr Output look() {
        return Output(0xFF);
    }

    constexpr Output() = default;

    bool is_done() const {
        return code_ == 0;
    }
    bool is_look() const {
        return code_ == 0xFF;
    }
    bool is_move() const {
        return !is_done() && !is_look();
    }
    /// Axis of a move symbol. Only meaningful when is_move().
    std::size_t axis() const {
        return static_cast<std::size_t>((code_ - 1) / 2);
    }
    /// +1 for an advance, -1 for a retreat, 0 otherwise.
    int direction() const;
    std::uint8_t code() const {
        return code_;
    }

    /// "dn", "+x1", "-x2", "look". Axes are printed 1-based.
    std::string str() const;
    static std::optional<Output> parse(const std::string &text);

    friend bool operator==(const Output &, const Output &) = default;
    friend auto operator<=>(const Output &, const Output &) = default;

   private:
    explicit constexpr Output(std::uint8_t code) : code_(code) {
    }
    std::uint8_t code_ = 0;
};

/// Micro-program stage of the on-board computer's head.
enum class Stage : std::uint8_t {
    copy = 0,
    test = 1,
    decrement = 2,
    look = 3,
    compare = 4,
    increment = 5,
    uncopy = 6,
    done = 7,
};

std::string stage_name(Stage stage);

/// Head state of the on-board computer: a stage plus the register axis and
/// qubit index it is working on.
struct Head {
    Stage stage = Stage::copy;
    std::uint8_t axis = 0;
    std::uint8_t bit = 0;

    friend bool operator==(const Head &, const Head &) = default;
    friend auto operator<=>(const Head &, const Head &) = default;
};

/// One classical configuration of the whole system. Ordering is
/// lexicographic over the fields in declaration order.
struct ConfigLabel {
    Coords position;
    Coords memory;
    Coords comp;
    Output output;
    std::uint8_t control = 1;
    std::uint8_t record = 0;
    std::uint64_t ballast = 0;
    Head head;

    std::string str() const;

    friend bool operator==(const ConfigLabel &, const ConfigLabel &) = default;
    friend auto operator<=>(const ConfigLabel &, const ConfigLabel &) = default;
};

std::ostream &operator<<(std::ostream &out, const ConfigLabel &label);

/// Image of a label under a component map: new label and a phase factor.
struct Mapped {
    ConfigLabel label;
    Complex phase{1.0, 0.0};
};

/// Injective label map with per-label phase (permutation-with-phase operator).
using ComponentMap = std::function<Mapped(const ConfigLabel &)>;

/// Raised when a component map sends two labels of the support to one label.
class NonInjectiveMapError : public std::runtime_error {
   public:
    NonInjectiveMapError(const ConfigLabel &first, const ConfigLabel &second, const ConfigLabel &image);

    ConfigLabel first;
    ConfigLabel second;
    ConfigLabel image;
};

/// Sparse wavefunction: ConfigLabel -> amplitude, iterated in label order.
class SparseState {
   public:
    using Terms = std::map<ConfigLabel, Complex>;

    SparseState() = default;
    static SparseState basis(const ConfigLabel &label, Complex amplitude = 1.0);

    /// Adds `amplitude` to the term at `label`; prunes the result if it cancels.
    void add(const ConfigLabel &label, Complex amplitude);
    Complex amplitude(const ConfigLabel &label) const;

    const Terms &terms() const {
        return terms_;
    }
    std::size_t size() const {
        return terms_.size();
    }
    bool empty() const {
        return terms_.empty();
    }
    Terms::const_iterator begin() const {
        return terms_.begin();
    }
    Terms::const_iterator end() const {
        return terms_.end();
    }

    SparseState scaled(Complex factor) const;

    friend bool operator==(const SparseState &, const SparseState &) = default;

   private:
    Terms terms_;
};

double norm(const SparseState &state);
Complex inner(const SparseState &a, const SparseState &b);

/// a + factor * b.
SparseState axpy(const SparseState &a, Complex factor, const SparseState &b);

/// Applies `map` term by term. Throws NonInjectiveMapError on a collision.
SparseState apply_component_map(const SparseState &state, const ComponentMap &map);

/// Register fields of a ConfigLabel, usable as a bit set.
enum class Register : std::uint8_t {
    position = 1 << 0,
    memory = 1 << 1,
    comp = 1 << 2,
    output = 1 << 3,
    control = 1 << 4,
    record = 1 << 5,
    ballast = 1 << 6,
    head = 1 << 7,
};

class RegisterSet {
   public:
    constexpr RegisterSet() = default;
    constexpr RegisterSet(Register r) : bits_(static_cast<std::uint8_t>(r)) {  // NOLINT(google-explicit-constructor)
    }
    constexpr RegisterSet operator|(RegisterSet other) const {
        RegisterSet out;
        out.bits_ = static_cast<std::uint8_t>(bits_ | other.bits_);
        return out;
    }
    constexpr bool contains(Register r) const {
        return (bits_ & static_cast<std::uint8_t>(r)) != 0;
    }
    constexpr RegisterSet complement() const {
        RegisterSet out;
        out.bits_ = static_cast<std::uint8_t>(~bits_);
        return out;
    }

   private:
    std::uint8_t bits_ = 0;
};

constexpr RegisterSet operator|(Register a, Register b) {
    return RegisterSet(a) | RegisterSet(b);
}

/// Copy of `label` with every field outside `keep` reset to its default.
ConfigLabel project(const ConfigLabel &label, RegisterSet keep);

/// Reduced density matrix over the kept registers. `basis[i]` is the projected
/// label indexing row/column i.
struct DensityMatrix {
    std::vector<ConfigLabel> basis;
    Eigen::MatrixXcd entries;

    std::size_t dim() const {
        return basis.size();
    }
};

/// Tr_rest |state><state|, with kept values enumerated from the support.
DensityMatrix reduced_density(const SparseState &state, RegisterSet keep = Register::memory);

/// -sum lambda log2 lambda over the positive eigenvalues.
double entropy_bits(const DensityMatrix &rho);

/// Entropy of the kept registers read off the support structure. Exact when
/// each kept value occurs alongside a single value of the remaining registers
/// (true for permutation dynamics before any mixing of components); returns
/// nullopt otherwise.
std::optional<double> support_entropy_bits(const SparseState &state, RegisterSet keep = Register::memory);

}  // namespace qrobot
