/*@ requires size >= 1; */
int SearchZero(int* data, int size) {
    int i = 0;
    while (i < size) {
        if (data[i] != 0) {
            break;
        }
        i = i + 1;
    }
    if (i == size) {
        return 0;
    }
    return 1;
}
