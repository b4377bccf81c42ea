/*@ requires n >= 1 && n <= len_a; */
int ArrayMax(int* a, int n) {
    int m = a[0];
    int i = 1;
    while (i < n) {
        if (m < a[i]) {
            m = a[i];
        }
        i = i + 1;
    }
    return m;
}
