/*@
  requires n == 0 && n <= len_a;
  assigns \nothing;
  ensures \result == 0;
*/
int ZeroIter(int* a, int n) {
    int i = 0;
    /*@
      loop invariant 0 <= i <= n;
      loop invariant \forall integer k; 0 <= k < i ==> a[k] == 7;
      loop assigns i, a[0 .. n - 1];
    */
    while (i < n) {
        a[i] = 7;
        i = i + 1;
    }
    return 0;
}
