"""Character n-gram weight stores and a sentiment benchmark built on them."""
