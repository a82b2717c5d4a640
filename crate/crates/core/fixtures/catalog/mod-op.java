class Calendar {
    int weekday(int daysSince19700101) {
        int day = daysSince19700101 % 7;
        return day;
    }
}
