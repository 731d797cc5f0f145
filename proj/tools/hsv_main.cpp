#include <cstdio>
int main() { std::puts("hsv: cli not wired yet"); return 0; }
