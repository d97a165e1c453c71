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

#include "mifefl/algebra/group.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "mifefl/algebra/modp_groups.h"

namespace mifefl {
namespace {

mpz_class FromHex(std::string_view hex) {
  return mpz_class(std::string(hex), 16);
}

}  // namespace

size_t GroupParams::ModulusBits() const {
  return mpz_sizeinbase(modulus_p.get_mpz_t(), 2);
}

size_t GroupParams::OrderBits() const {
  return mpz_sizeinbase(order_q.get_mpz_t(), 2);
}

size_t GroupParams::ElementBytes() const { return (ModulusBits() + 7) / 8; }

absl::Status GroupParams::Validate() const {
  if (modulus_p < 5 || order_q < 2) {
    return absl::InvalidArgumentError("group modulus/order too small");
  }
  if (mpz_probab_prime_p(modulus_p.get_mpz_t(), 25) == 0) {
    return absl::InvalidArgumentError("modulus p is not prime");
  }
  if (mpz_probab_prime_p(order_q.get_mpz_t(), 25) == 0) {
    return absl::InvalidArgumentError("order q is not prime");
  }
  mpz_class pm1 = modulus_p - 1;
  if (!mpz_divisible_p(pm1.get_mpz_t(), order_q.get_mpz_t())) {
    return absl::InvalidArgumentError("order q does not divide p - 1");
  }
  if (generator_g < 2 || generator_g >= modulus_p) {
    return absl::InvalidArgumentError("generator outside [2, p-1]");
  }
  // q prime and g != 1 with g^q = 1 means the order is exactly q.
  mpz_class check;
  mpz_powm(check.get_mpz_t(), generator_g.get_mpz_t(), order_q.get_mpz_t(),
           modulus_p.get_mpz_t());
  if (check != 1) {
    return absl::InvalidArgumentError("generator does not have order q");
  }
  return absl::OkStatus();
}

absl::StatusOr<GroupParams> GroupGen(std::string_view preset) {
  GroupParams group;
  group.name = std::string(preset);
  if (preset == "toy") {
    group.modulus_p = 23;
    group.order_q = 11;
    group.generator_g = 4;
  } else if (preset == "toy-512") {
    group.modulus_p = FromHex(kToySafePrime512Hex);
    group.order_q = (group.modulus_p - 1) / 2;
    group.generator_g = 4;
  } else if (preset == "nist-3072") {
    group.modulus_p = FromHex(kModp3072Hex);
    group.order_q = (group.modulus_p - 1) / 2;
    group.generator_g = 2;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown group preset '", std::string(preset), "'"));
  }
  return group;
}

mpz_class Mod(const mpz_class& v, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class GroupPow(const GroupParams& group, const mpz_class& base,
                   const mpz_class& exponent) {
  mpz_class e = Mod(exponent, group.order_q);
  mpz_class r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(),
           group.modulus_p.get_mpz_t());
  return r;
}

mpz_class GroupExp(const GroupParams& group, const mpz_class& exponent) {
  return GroupPow(group, group.generator_g, exponent);
}

mpz_class GroupMul(const GroupParams& group, const mpz_class& a,
                   const mpz_class& b) {
  mpz_class r = a * b;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), group.modulus_p.get_mpz_t());
  return r;
}

mpz_class GroupInverse(const GroupParams& group, const mpz_class& a) {
  mpz_class r;
  mpz_invert(r.get_mpz_t(), a.get_mpz_t(), group.modulus_p.get_mpz_t());
  return r;
}

bool IsGroupElement(const GroupParams& group, const mpz_class& a) {
  if (a < 1 || a >= group.modulus_p) return false;
  mpz_class check;
  mpz_powm(check.get_mpz_t(), a.get_mpz_t(), group.order_q.get_mpz_t(),
           group.modulus_p.get_mpz_t());
  return check == 1;
}

void WriteElement(const GroupParams& group, const mpz_class& element,
                  std::vector<uint8_t>& out) {
  const size_t width = group.ElementBytes();
  const size_t start = out.size();
  out.resize(start + width, 0);
  size_t count = 0;
  const size_t used = (mpz_sizeinbase(element.get_mpz_t(), 2) + 7) / 8;
  mpz_export(out.data() + start + (width - used), &count, 1, 1, 1, 0,
             element.get_mpz_t());
}

absl::StatusOr<mpz_class> ReadElement(const GroupParams& group,
                                      const uint8_t* data, size_t size) {
  if (size != group.ElementBytes()) {
    return absl::InvalidArgumentError("group element has wrong width");
  }
  mpz_class v;
  mpz_import(v.get_mpz_t(), size, 1, 1, 1, 0, data);
  if (v >= group.modulus_p) {
    return absl::InvalidArgumentError("group element not reduced");
  }
  return v;
}

FixedBaseTable::FixedBaseTable(const GroupParams& group, const mpz_class& base)
    : modulus_(group.modulus_p), order_(group.order_q), base_(base) {
  const size_t bits = group.OrderBits();
  window_bits_ = bits >= 1024 ? 6 : (bits >= 256 ? 5 : 2);
  const size_t windows = (bits + window_bits_ - 1) / window_bits_;
  const size_t digits = (size_t{1} << window_bits_) - 1;
  table_.resize(windows);
  mpz_class column_base = base_;
  for (size_t i = 0; i < windows; ++i) {
    auto& row = table_[i];
    row.reserve(digits);
    row.push_back(column_base);
    for (size_t d = 1; d < digits; ++d) {
      mpz_class next = row.back() * column_base;
      mpz_mod(next.get_mpz_t(), next.get_mpz_t(), modulus_.get_mpz_t());
      row.push_back(std::move(next));
    }
    // column_base^(2^w) = row.back() * column_base.
    column_base = row.back() * column_base;
    mpz_mod(column_base.get_mpz_t(), column_base.get_mpz_t(),
            modulus_.get_mpz_t());
  }
}

mpz_class FixedBaseTable::Pow(const mpz_class& exponent) const {
  mpz_class e = Mod(exponent, order_);
  mpz_class acc = 1;
  const size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  const unsigned long mask = (1ul << window_bits_) - 1;
  for (size_t i = 0; i * window_bits_ < bits && i < table_.size(); ++i) {
    unsigned long digit = 0;
    for (unsigned b = 0; b < window_bits_; ++b) {
      if (mpz_tstbit(e.get_mpz_t(), i * window_bits_ + b)) digit |= 1ul << b;
    }
    digit &= mask;
    if (digit == 0) continue;
    acc *= table_[i][digit - 1];
    mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), modulus_.get_mpz_t());
  }
  return acc;
}

}  // namespace mifefl
