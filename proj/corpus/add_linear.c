/*@ requires n >= 0; */
int AddLinear(int x, int c, int n) {
    int i = 0;
    while (i < n) {
        x = x + c;
        i = i + 1;
    }
    return x;
}
