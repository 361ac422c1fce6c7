#pragma once

#include <cmath>

// dB/dBm appear only at configuration boundaries; everything else is SI
// (Hz, W, bits, seconds, joules).
namespace hflopt {

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace hflopt
