#include <cstdio>
int main() { std::puts("betalab: not wired up yet"); return 1; }
