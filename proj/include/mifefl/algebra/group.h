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

#ifndef MIFEFL_ALGEBRA_GROUP_H_
#define MIFEFL_ALGEBRA_GROUP_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace mifefl {

// Prime-order subgroup of Z_p^*: generator g of order q, q | p - 1.
struct GroupParams {
  std::string name;
  mpz_class modulus_p;
  mpz_class order_q;
  mpz_class generator_g;

  size_t ModulusBits() const;
  size_t OrderBits() const;
  // Fixed serialization width of one group element, ceil(log2 p / 8) bytes.
  size_t ElementBytes() const;

  // Checks primality of p and q, q | p - 1, and that g has order exactly q.
  absl::Status Validate() const;
};

// Presets: "toy" (p=23, q=11, g=4), "toy-512" (512-bit safe prime, g=4) and
// "nist-3072" (RFC 3526 MODP group 15, g=2).
absl::StatusOr<GroupParams> GroupGen(std::string_view preset);

// Canonical representative of v modulo m, in [0, m).
mpz_class Mod(const mpz_class& v, const mpz_class& m);

// base^exponent mod p. The exponent is reduced mod q first, so negative
// exponents act as inverses in the subgroup.
mpz_class GroupPow(const GroupParams& group, const mpz_class& base,
                   const mpz_class& exponent);
// g^exponent mod p.
mpz_class GroupExp(const GroupParams& group, const mpz_class& exponent);
mpz_class GroupMul(const GroupParams& group, const mpz_class& a,
                   const mpz_class& b);
mpz_class GroupInverse(const GroupParams& group, const mpz_class& a);

// True when a is a canonical element of the order-q subgroup.
bool IsGroupElement(const GroupParams& group, const mpz_class& a);

// Fixed-width big-endian encoding of a group element.
void WriteElement(const GroupParams& group, const mpz_class& element,
                  std::vector<uint8_t>& out);
absl::StatusOr<mpz_class> ReadElement(const GroupParams& group,
                                      const uint8_t* data, size_t size);

// Precomputed powers of a fixed base: table[i][d-1] = base^(d * 2^(w*i)).
// Pow() then costs one modular multiplication per nonzero exponent digit.
class FixedBaseTable {
 public:
  FixedBaseTable(const GroupParams& group, const mpz_class& base);

  mpz_class Pow(const mpz_class& exponent) const;
  const mpz_class& base() const { return base_; }

 private:
  mpz_class modulus_;
  mpz_class order_;
  mpz_class base_;
  unsigned window_bits_;
  std::vector<std::vector<mpz_class>> table_;
};

}  // namespace mifefl

#endif  // MIFEFL_ALGEBRA_GROUP_H_
