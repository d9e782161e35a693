#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lobsim {

/// Integer price in ticks. One tick is the exchange's minimum price increment.
struct Price {
    std::int32_t ticks = 0;

    friend constexpr auto operator<=>(Price, Price) = default;
};

constexpr Price operator+(Price p, std::int32_t d) { return Price{p.ticks + d}; }
constexpr Price operator-(Price p, std::int32_t d) { return Price{p.ticks - d}; }

using Quantity = std::int64_t;
using OrderId = std::uint64_t;
using TraderId = std::uint32_t;
using SimTime = double;
using EventSeq = std::uint64_t;

enum class Side : std::uint8_t { bid, ask };
enum class Role : std::uint8_t { buyer, seller };

constexpr Side opposite(Side s) { return s == Side::bid ? Side::ask : Side::bid; }
constexpr Side side_of(Role r) { return r == Role::buyer ? Side::bid : Side::ask; }

std::string_view to_string(Side s);
std::string_view to_string(Role r);
Side parse_side(std::string_view text);
Role parse_role(std::string_view text);

struct Order {
    OrderId id = 0;
    TraderId trader = 0;
    Side side = Side::bid;
    Price price;
    Quantity quantity = 0;
    SimTime submit_time = 0.0;
};

/// Legal price interval for an exchange.
struct PriceRange {
    Price min{1};
    Price max{500};

    constexpr bool contains(Price p) const { return p >= min && p <= max; }
    constexpr Price clamp(Price p) const { return p < min ? min : (p > max ? max : p); }
};

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Raised for malformed configuration or experiment designs, before any simulation runs.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lobsim
