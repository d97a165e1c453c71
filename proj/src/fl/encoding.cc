/*
 * Copyright 2026 The MIFE-FL Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mifefl/fl/encoding.h"

#include <charconv>
#include <cmath>
#include <cstring>
#include <string>

#include <gmpxx.h>
#include <sodium.h>

#include "absl/strings/str_cat.h"

namespace mifefl::fl {

RoundLabel DeriveLabel(const LabelSeed& seed, uint64_t round,
                       uint64_t label_bound, std::string_view domain) {
  std::string message = absl::StrCat("mifefl.label.", std::string(domain), ":");
  for (int shift = 56; shift >= 0; shift -= 8) {
    message.push_back(static_cast<char>((round >> shift) & 0xff));
  }
  unsigned char mac[crypto_auth_hmacsha256_BYTES];
  crypto_auth_hmacsha256_state state;
  crypto_auth_hmacsha256_init(&state, seed.data(), seed.size());
  crypto_auth_hmacsha256_update(
      &state, reinterpret_cast<const unsigned char*>(message.data()),
      message.size());
  crypto_auth_hmacsha256_final(&state, mac);
  // 128 bits reduced mod the bound; the bias is below 2^-64.
  unsigned __int128 v = 0;
  for (int i = 0; i < 16; ++i) v = (v << 8) | mac[i];
  return RoundLabel{round, static_cast<uint64_t>(v % label_bound)};
}

int64_t PowerOfTen(int delta) {
  int64_t p = 1;
  for (int i = 0; i < delta; ++i) p *= 10;
  return p;
}

absl::StatusOr<int64_t> EncodeValue(double w, int delta) {
  if (!std::isfinite(w)) {
    return absl::InvalidArgumentError("cannot encode a non-finite parameter");
  }
  if (delta < 0 || delta > 18) {
    return absl::InvalidArgumentError("precision must be in [0, 18]");
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), w, std::chars_format::scientific);
  std::string text(buf, res.ptr);
  // d.ddddde[+-]xx
  const bool negative = text[0] == '-';
  if (negative) text.erase(0, 1);
  const size_t e = text.find('e');
  std::string mantissa = text.substr(0, e);
  int exponent = std::stoi(text.substr(e + 1));
  std::string digits;
  for (char c : mantissa) {
    if (c != '.') digits.push_back(c);
  }
  // value = digits * 10^(exponent - (digits.size() - 1))
  const int shift = exponent - static_cast<int>(digits.size()) + 1 + delta;
  mpz_class v(digits, 10);
  mpz_class ten(10), scale;
  if (shift >= 0) {
    mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(shift));
    v *= scale;
  } else {
    mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(-shift));
    mpz_tdiv_q(v.get_mpz_t(), v.get_mpz_t(), scale.get_mpz_t());
  }
  if (negative) v = -v;
  if (!v.fits_slong_p()) {
    return absl::OutOfRangeError(
        absl::StrCat("encoded value of ", w, " overflows 64 bits"));
  }
  return static_cast<int64_t>(v.get_si());
}

absl::StatusOr<std::vector<int64_t>> EncodeParameters(
    const std::vector<double>& w, int delta) {
  std::vector<int64_t> out;
  out.reserve(w.size());
  for (size_t j = 0; j < w.size(); ++j) {
    auto x = EncodeValue(w[j], delta);
    if (!x.ok()) {
      return absl::Status(x.status().code(),
                          absl::StrCat("parameter ", j, ": ", x.status().message()));
    }
    out.push_back(*x);
  }
  return out;
}

std::vector<int64_t> MaskWithLabel(const std::vector<int64_t>& x,
                                   uint64_t gamma) {
  std::vector<int64_t> out(x);
  for (auto& v : out) v += static_cast<int64_t>(gamma);
  return out;
}

std::vector<int64_t> Unmask(const std::vector<int64_t>& r, uint64_t gamma,
                            size_t n) {
  const int64_t shift = static_cast<int64_t>(gamma) * static_cast<int64_t>(n);
  std::vector<int64_t> out(r);
  for (auto& v : out) v -= shift;
  return out;
}

std::vector<double> Decode(const std::vector<int64_t>& m, size_t n, int delta) {
  const double denom =
      static_cast<double>(PowerOfTen(delta)) * static_cast<double>(n);
  std::vector<double> out;
  out.reserve(m.size());
  for (int64_t v : m) out.push_back(static_cast<double>(v) / denom);
  return out;
}

std::vector<double> UnmaskAndDecode(const std::vector<int64_t>& r,
                                    uint64_t gamma, size_t n, int delta) {
  return Decode(Unmask(r, gamma, n), n, delta);
}

}  // namespace mifefl::fl
