"""Statistics of random permutations without long cycles."""
