#pragma once

#include "sheafrig/gf.hpp"

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace sheafrig {

struct FieldConfig {
    int characteristic = 2;
    void validate() const;
};

struct Endpoint {
    enum class Kind { NegInfinity, Finite, PosInfinity };
    Kind kind = Kind::Finite;
    double value = 0.0;
    bool closed = false;

    static Endpoint neg_inf() { return {Kind::NegInfinity, -std::numeric_limits<double>::infinity(), false}; }
    static Endpoint pos_inf() { return {Kind::PosInfinity, std::numeric_limits<double>::infinity(), false}; }
    static Endpoint closed_at(double v) { return {Kind::Finite, v, true}; }
    static Endpoint open_at(double v) { return {Kind::Finite, v, false}; }

    bool finite() const { return kind == Kind::Finite; }
    bool operator==(const Endpoint&) const = default;
};

// k_B[degree] for the interval B = (left, right) with the given closedness.
struct Bar {
    Endpoint left;
    Endpoint right;
    int degree = 0;

    bool operator==(const Bar&) const = default;
};

// open interval (lo, hi); either end may be infinite
struct OpenInterval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool operator==(const OpenInterval&) const = default;
};

Endpoint ambient_left(const OpenInterval& amb);
Endpoint ambient_right(const OpenInterval& amb);

struct Barcode {
    OpenInterval ambient;
    std::vector<Bar> bars;
    FieldConfig field;

    void validate() const;
    void sort();
};

// Exit-path encoding: stalks at positions 0..2k alternate stratum, point, stratum, ...
// Position 2m+1 is the critical point s_{m+1}; lambda[m] : V_{2m+1} -> V_{2m},
// rho[m] : V_{2m+1} -> V_{2m+2}.
struct ZigzagPresentation {
    OpenInterval ambient;
    std::vector<double> critical_points;
    std::vector<int> stalk_dims;
    std::vector<GFMatrix> lambda;
    std::vector<GFMatrix> rho;
    FieldConfig field;

    int num_points() const { return static_cast<int>(critical_points.size()); }
    void validate() const;
};

struct ProfileEntry {
    double point = 0.0;
    bool plus = false;
    bool minus = false;

    bool operator==(const ProfileEntry&) const = default;
};

struct MicrosupportProfile1D {
    std::vector<ProfileEntry> entries;

    bool has_minus() const;
    bool has_plus() const;
    bool operator==(const MicrosupportProfile1D&) const = default;
};

// Bar classification against an ambient interval.
bool left_is_ambient(const Bar& bar, const OpenInterval& amb);
bool right_is_ambient(const Bar& bar, const OpenInterval& amb);
bool is_full(const Bar& bar, const OpenInterval& amb);
// finite left => closed, finite right => open (ambient ends allowed)
bool is_sigma_positive(const Bar& bar, const OpenInterval& amb);
bool is_sigma_negative(const Bar& bar, const OpenInterval& amb);
bool bar_nonempty(const Bar& bar);
bool bar_less(const Bar& a, const Bar& b);

Barcode decompose(const ZigzagPresentation& pres);
// Presentation of a barcode whose bars all carry the same degree, on the given critical points.
ZigzagPresentation present(const Barcode& bc, const std::vector<double>& critical_points);

MicrosupportProfile1D microsupport_profile(const ZigzagPresentation& pres);
MicrosupportProfile1D microsupport_profile(const Barcode& bc);

std::vector<double> s_infty(const Barcode& bc);

struct BoundedBar {
    double left;
    double right;
    int degree;
    bool operator==(const BoundedBar&) const = default;
    auto operator<=>(const BoundedBar&) const = default;
};
std::vector<BoundedBar> bounded_bars(const Barcode& bc);

// H^h(U; F) dimensions keyed by h (zero entries omitted).
std::map<int, int> global_sections(const Barcode& bc, const OpenInterval& U);

MicrosupportProfile1D limsup_microsupport(const std::vector<MicrosupportProfile1D>& seq, double tolerance = 1e-9);

struct FiberHull {
    bool plus = false;
    bool minus = false;
    bool proper = true;
};
FiberHull conv_fiber(bool plus, bool minus);

std::string to_string(const Bar& bar);

} // namespace sheafrig
