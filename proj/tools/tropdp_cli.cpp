#include <cstdio>
int main() { std::puts("tropdp: placeholder"); return 0; }
