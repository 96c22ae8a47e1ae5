#include <cstdio>

int main() {
    std::puts("skewfree_cli: not wired up yet");
    return 1;
}
