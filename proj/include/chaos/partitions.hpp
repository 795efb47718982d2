#pragma once

#include <string>
#include <vector>

namespace chaos {

// A partition of a finite set of positive integers into disjoint nonempty
// blocks.  Canonical form: elements sorted inside each block, blocks ordered
// by their smallest element.  Construction canonicalizes and validates.
class SetPartition {
 public:
  explicit SetPartition(std::vector<std::vector<int>> blocks);

  const std::vector<int>& ground() const { return ground_; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  int size() const { return static_cast<int>(blocks_.size()); }

  // True when every block of *this is contained in one block of `coarser`.
  // Both partitions must share the same ground set.
  bool refines(const SetPartition& coarser) const;

  // Text form "{1,3|2}".
  std::string to_string() const;
  static SetPartition parse(const std::string& text);

  bool operator==(const SetPartition& other) const { return blocks_ == other.blocks_; }

 private:
  std::vector<int> ground_;
  std::vector<std::vector<int>> blocks_;
};

// All partitions of `ground`, in canonical enumeration order (restricted
// growth strings on the sorted elements).  Guarded at |ground| <= 12.
std::vector<SetPartition> enumerate_partitions(const std::vector<int>& ground);

// The partitions of `ground` with exactly s blocks, in enumeration order.
std::vector<SetPartition> partitions_of_size(const std::vector<int>& ground, int s);

// Partition of {1,...,d} into singletons.
SetPartition singleton_partition(int d);

// Partition of {1,...,d}\{j} with block {k,d} and singletons elsewhere.
// Requires d >= 3, j != k, both in {1,...,d-1}.
SetPartition partition_jk(int d, int j, int k);

// Partition of {1,...,d}\I with block {k,d} and singletons elsewhere.
// Requires I a subset of {1,...,d-1} and k in {1,...,d-1}\I.
SetPartition partition_Ik(int d, const std::vector<int>& i_set, int k);

// Partition of {1,...,d} with block I∪{d} and singletons elsewhere.
// Requires I a nonempty subset of {1,...,d-1}.
SetPartition partition_PI(int d, const std::vector<int>& i_set);

}  // namespace chaos
