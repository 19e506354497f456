#include <iostream>
int main() { std::cout << "stub\n"; return 0; }
