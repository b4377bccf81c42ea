/*@
  requires size >= 1;
  assigns \nothing;
  ensures ((\forall integer k; 0 <= k < size ==> data[k] == 0) && \result == 0) || (\exists integer s; 0 <= s && s < size && data[s] != 0 && (\forall integer k; 0 <= k < s ==> data[k] == 0) && (\exists integer w; 0 <= w < s + 1 && data[w] != 0) && s <= size && s != size && \result == 1);
*/
int SearchZero(int* data, int size) {
    int i = 0;
    /*@
      loop invariant 0 <= i <= size;
      loop invariant \forall integer k; 0 <= k < i ==> data[k] == 0;
      loop assigns i;
    */
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
