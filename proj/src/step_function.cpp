#include "ncdist/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace ncdist {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

StepFunction::StepFunction(std::vector<Piece> pieces) {
    pieces_.reserve(pieces.size());
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        Piece p = pieces[i];
        if (std::isnan(p.length) || std::isnan(p.value) || std::isinf(p.value))
            throw std::invalid_argument("step function: non-finite piece");
        if (p.length <= 0.0)
            throw std::invalid_argument("step function: piece length must be positive");
        if (std::isinf(p.length) && i + 1 != pieces.size())
            throw std::invalid_argument("step function: infinite length only on the last piece");
        if (p.value < 0.0) {
            if (p.value < -1e-12) throw std::invalid_argument("step function: negative value");
            p.value = 0.0;
        }
        if (p.value == 0.0) continue;  // implicit zero tail
        if (!pieces_.empty()) {
            double prev = pieces_.back().value;
            if (p.value >= prev * (1.0 - 1e-12)) {
                if (p.value > prev * (1.0 + 1e-12))
                    throw std::invalid_argument("step function: values must decrease");
                pieces_.back().length += p.length;  // merge equal-valued neighbours
                continue;
            }
        }
        pieces_.push_back(p);
    }
    bounds_.resize(pieces_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        acc += pieces_[i].length;
        bounds_[i] = acc;
    }
}

StepFunction StepFunction::indicator(double length, double value) {
    return StepFunction({{length, value}});
}

bool StepFunction::has_infinite_tail() const {
    return !pieces_.empty() && std::isinf(pieces_.back().length);
}

double StepFunction::support_length() const {
    return pieces_.empty() ? 0.0 : bounds_.back();
}

double StepFunction::total_integral() const {
    double s = 0.0;
    for (const Piece& p : pieces_) s += p.length * p.value;
    return s;
}

double StepFunction::value_at(double t) const {
    if (t < 0.0) throw std::invalid_argument("value_at: t must be >= 0");
    auto it = std::upper_bound(bounds_.begin(), bounds_.end(), t);
    if (it == bounds_.end()) return 0.0;
    return pieces_[static_cast<std::size_t>(it - bounds_.begin())].value;
}

double StepFunction::value_left(double t) const {
    if (t <= 0.0) throw std::invalid_argument("value_left: t must be > 0");
    auto it = std::lower_bound(bounds_.begin(), bounds_.end(), t);
    if (it == bounds_.end()) return 0.0;
    return pieces_[static_cast<std::size_t>(it - bounds_.begin())].value;
}

double StepFunction::sup_value() const {
    return pieces_.empty() ? 0.0 : pieces_.front().value;
}

double StepFunction::distribution_at(double s) const {
    if (s < 0.0) throw std::invalid_argument("distribution_at: s must be >= 0");
    double m = 0.0;
    for (const Piece& p : pieces_) {
        if (p.value > s)
            m += p.length;
        else
            break;  // values decrease
    }
    return m;
}

double StepFunction::mu_inverse(double t) const {
    if (t < 0.0) throw std::invalid_argument("mu_inverse: t must be >= 0");
    auto it = std::upper_bound(bounds_.begin(), bounds_.end(), t);
    if (it == bounds_.end()) return 0.0;
    return pieces_[static_cast<std::size_t>(it - bounds_.begin())].value;
}

double StepFunction::prefix_integral(double t) const {
    if (t < 0.0) throw std::invalid_argument("prefix_integral: t must be >= 0");
    double s = 0.0, lo = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        double hi = bounds_[i];
        if (t <= lo) break;
        s += (std::min(t, hi) - lo) * pieces_[i].value;
        lo = hi;
    }
    return s;
}

double StepFunction::integral_pow(double p) const {
    if (p <= 0.0) throw std::invalid_argument("integral_pow: p must be > 0");
    double s = 0.0;
    for (const Piece& pc : pieces_) s += pc.length * std::pow(pc.value, p);
    return s;
}

StepFunction StepFunction::dilate(double s) const {
    if (!(s > 0.0)) throw std::invalid_argument("dilate: factor must be > 0");
    std::vector<Piece> out = pieces_;
    for (Piece& p : out) p.length *= s;
    return StepFunction(std::move(out));
}

StepFunction StepFunction::power(double p) const {
    if (p <= 0.0) throw std::invalid_argument("power: exponent must be > 0");
    std::vector<Piece> out = pieces_;
    for (Piece& pc : out) pc.value = std::pow(pc.value, p);
    return StepFunction(std::move(out));
}

StepFunction StepFunction::scale(double c) const {
    if (c < 0.0) throw std::invalid_argument("scale: factor must be >= 0");
    std::vector<Piece> out = pieces_;
    for (Piece& pc : out) pc.value *= c;
    return StepFunction(std::move(out));
}

StepFunction StepFunction::restrict_to(double t) const {
    if (t <= 0.0) throw std::invalid_argument("restrict_to: t must be > 0");
    std::vector<Piece> out;
    double lo = 0.0;
    for (std::size_t i = 0; i < pieces_.size() && lo < t; ++i) {
        double hi = std::min(bounds_[i], t);
        out.push_back({hi - lo, pieces_[i].value});
        lo = bounds_[i];
    }
    return StepFunction(std::move(out));
}

std::string StepFunction::to_json() const {
    nlohmann::ordered_json j;
    j["pieces"] = nlohmann::ordered_json::array();
    for (const Piece& p : pieces_) {
        nlohmann::ordered_json e = nlohmann::ordered_json::array();
        if (std::isinf(p.length))
            e.push_back("inf");
        else
            e.push_back(p.length);
        e.push_back(p.value);
        j["pieces"].push_back(e);
    }
    return j.dump();
}

StepFunction StepFunction::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<Piece> pieces;
    for (const auto& e : j.at("pieces")) {
        double len;
        if (e.at(0).is_string()) {
            if (e.at(0).get<std::string>() != "inf")
                throw std::invalid_argument("step function json: bad length");
            len = kInf;
        } else {
            len = e.at(0).get<double>();
        }
        pieces.push_back({len, e.at(1).get<double>()});
    }
    return StepFunction(std::move(pieces));
}

bool approx_equal(const StepFunction& f, const StepFunction& g, double tol) {
    double scale = std::max(f.sup_value(), g.sup_value());
    if (scale == 0.0) return true;
    std::vector<double> pts;
    for (double b : f.bounds())
        if (!std::isinf(b)) pts.push_back(b);
    for (double b : g.bounds())
        if (!std::isinf(b)) pts.push_back(b);
    pts.push_back(0.0);
    for (double t : pts) {
        if (std::abs(f.value_at(t) - g.value_at(t)) > tol * scale) return false;
        if (t > 0.0 && std::abs(f.value_left(t) - g.value_left(t)) > tol * scale) return false;
    }
    // infinite tails must agree too
    double ft = f.has_infinite_tail() ? f.pieces().back().value : 0.0;
    double gt = g.has_infinite_tail() ? g.pieces().back().value : 0.0;
    return std::abs(ft - gt) <= tol * scale;
}

}  // namespace ncdist
