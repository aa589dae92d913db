#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "egab/olps.hpp"

namespace egab {

/// Reads a CSV of price relatives: a header of asset identifiers (optionally
/// led by a "date" column) and one row per period. Throws ParseError naming
/// the line of any malformed, ragged or non-positive entry.
MarketData load_dataset(const std::string& path);
MarketData parse_dataset(std::istream& in);

/// Same layout, but rows are raw prices; consecutive rows are divided to form
/// relatives, so the result has one period fewer than the file has rows.
MarketData load_prices(const std::string& path);
MarketData parse_prices(std::istream& in);

/// Writes relatives in the format read by load_dataset (17 significant digits).
void write_dataset(std::ostream& out, const MarketData& data);

/// Seeded synthetic market: each asset's log price is a linear trend plus an
/// AR(1) deviation, which gives the relatives short-horizon mean reversion.
MarketData generate_synthetic(std::size_t assets, std::size_t periods, std::uint64_t seed);

}  // namespace egab
