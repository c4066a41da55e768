// placeholder while the library grows; the real CLI lands last
int main() { return 0; }
