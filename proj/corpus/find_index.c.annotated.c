/*@
  requires n >= 0 && n <= len_a;
  assigns \nothing;
  ensures (n <= 0 && \result == 0) || (0 < n && (\forall integer k; 0 <= k < n ==> a[k] != t) && \result == n) || (0 <= \result && \result < n && a[\result] == t && (\forall integer k; 0 <= k < \result ==> a[k] != t) && (\exists integer w; 0 <= w < \result + 1 && a[w] == t) && \result <= n);
*/
int FindIndex(int* a, int n, int t) {
    int i = 0;
    /*@
      loop invariant 0 <= i <= n;
      loop invariant \forall integer k; 0 <= k < i ==> a[k] != t;
      loop assigns i;
    */
    while (i < n) {
        if (a[i] == t) {
            break;
        }
        i = i + 1;
    }
    return i;
}
